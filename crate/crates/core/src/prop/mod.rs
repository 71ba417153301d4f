//! Props over finite sets: collections, free props, decorated graphs and
//! the pushout of a free prop along a generating map.

pub mod collection;
pub mod compare;
pub mod decorate;
pub mod decorated;
pub mod filtration;
pub mod free;
pub mod oracle;
pub mod scenario;
pub mod sigma;

pub use collection::{collection_from_json, Alphabet, Collection, EntryJson, EntrySet};
pub use decorated::{DecKey, Decorated};
pub use free::{FreeProp, PropEntry};
pub use sigma::{sort_ports, StabGroup};
pub use compare::{compare, Comparison};
pub use decorate::{decorate, AutGroup, Decoration, EntrySource};
pub use filtration::{attach_unit_maps, filtration, Filtration, PushoutProblem, Stage, UnitMaps};
pub use oracle::{pushout_oracle, OracleEntry};
pub use scenario::{OrbitRun, Scenario, ScenarioJson};
