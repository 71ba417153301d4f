use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "props",
    version,
    about = "Graphs, pasting schemes, marked-graph reduction and pushout filtrations of generalized props"
)]
pub struct Cli {
    /// Read the JSON input from this file instead of stdin.
    #[arg(long = "in", global = true, value_name = "PATH")]
    pub input: Option<PathBuf>,
    /// Write the output to this file instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,
    /// Seed for every randomized sample.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads; output does not depend on it.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    /// Output format for commands that produce a graph.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Dot,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Validation, profiles, isomorphism and automorphisms of one graph.
    #[command(subcommand)]
    Graph(GraphCmd),
    /// Substitution, extension and shrinking.
    #[command(subcommand)]
    Ops(OpsCmd),
    /// Membership and bounded checks of pasting schemes.
    #[command(subcommand)]
    Scheme(SchemeCmd),
    /// Marked graphs: classification, reduction, enumeration.
    #[command(subcommand)]
    Marked(MarkedCmd),
    /// Finite sets and vector spaces with group actions.
    #[command(subcommand)]
    Equi(EquiCmd),
    /// Free props, the pushout oracle and the filtration.
    #[command(subcommand)]
    Prop(PropCmd),
}

#[derive(Debug, Subcommand)]
pub enum GraphCmd {
    /// Checks the structural invariants of a graph.
    Validate,
    /// The profile of a graph and its orbit.
    Profile,
    /// Weak (or strict) isomorphism between `g` and `h`.
    Iso {
        #[arg(long)]
        strict: bool,
    },
    /// The canonical representative and key.
    Canon,
    /// The automorphism group, fixing any marks setwise.
    Aut {
        #[arg(long)]
        cap: Option<usize>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SideArg {
    Input,
    Output,
    Both,
}

#[derive(Debug, Subcommand)]
pub enum OpsCmd {
    /// Substitutes `pieces` (keyed by vertex) into `graph`.
    Substitute,
    /// Adds a unary vertex on every leg of one side.
    Extend {
        #[arg(long, value_enum)]
        side: SideArg,
    },
    /// Shrinks one internal edge.
    Shrink {
        #[arg(long)]
        edge: usize,
    },
    /// Shrinks a set of internal edges and reports the decomposition.
    ShrinkSet {
        #[arg(long, value_delimiter = ',', num_args = 0..)]
        edges: Vec<usize>,
    },
}

#[derive(Debug, Clone, Args)]
pub struct SchemeArg {
    /// A built-in scheme, e.g. connected-wheeled, wheeled-trees,
    /// simply-connected, unital-trees, unital-linear, wheel-free.
    #[arg(long)]
    pub scheme: String,
}

#[derive(Debug, Clone, Args)]
pub struct BoundArgs {
    #[arg(long, default_value_t = 4)]
    pub max_vertices: usize,
    #[arg(long, default_value_t = 10)]
    pub max_flags: usize,
    /// Number of colors.
    #[arg(long, default_value_t = 1)]
    pub colors: usize,
}

#[derive(Debug, Subcommand)]
pub enum SchemeCmd {
    /// Whether the input graph belongs to the scheme.
    Member {
        #[command(flatten)]
        scheme: SchemeArg,
    },
    /// Checks the pasting-scheme axioms on every member within the bound.
    CheckAxioms {
        #[command(flatten)]
        scheme: SchemeArg,
        #[command(flatten)]
        bound: BoundArgs,
        /// Also test associativity and unitality of substitution on this
        /// many random instances.
        #[arg(long, default_value_t = 0)]
        samples: usize,
    },
    /// Shrinks every internal edge of every member within the bound.
    CheckShrink {
        #[command(flatten)]
        scheme: SchemeArg,
        #[command(flatten)]
        bound: BoundArgs,
    },
}

#[derive(Debug, Subcommand)]
pub enum MarkedCmd {
    /// Plain, well-marked or reduced.
    Classify,
    /// Shrinks every normal-normal edge.
    Reduce {
        #[command(flatten)]
        scheme: SchemeArg,
        /// Also reduce in this many random edge orders and compare.
        #[arg(long, default_value_t = 0)]
        orders: usize,
    },
    /// All reduced marked graphs with the given profiles.
    Enumerate {
        #[command(flatten)]
        scheme: SchemeArg,
        /// Color names, comma separated.
        #[arg(long, default_value = "c", value_delimiter = ',')]
        colors: Vec<String>,
        /// Graph profile, e.g. `c,c;c`.
        #[arg(long)]
        r: String,
        /// Profile of the distinguished vertices.
        #[arg(long)]
        s: String,
        /// Number of distinguished vertices.
        #[arg(long)]
        k: usize,
    },
}

#[derive(Debug, Subcommand)]
pub enum EquiCmd {
    /// Induction along a subgroup embedding.
    Induce,
    /// The pushout of `f: c → a` and `g: c → b`.
    Pushout,
    /// The Q-construction of an injection of finite sets.
    Q,
    /// Whether the action is free, with a fixed-point witness if not.
    Freecheck,
}

#[derive(Debug, Clone, Args)]
pub struct OrbitArgs {
    /// Profiles to compute at, e.g. `c,c;c`; repeatable.
    #[arg(long = "r")]
    pub r: Vec<String>,
    /// Every profile orbit of total arity at most this.
    #[arg(long)]
    pub rmax: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum PropCmd {
    /// Entries of a free prop given scheme, colors, bound and generators.
    Free {
        #[command(flatten)]
        orbits: OrbitArgs,
        /// Include every element in the output.
        #[arg(long)]
        list: bool,
    },
    /// The brute-force pushout entry of a scenario.
    PushoutOracle {
        #[command(flatten)]
        orbits: OrbitArgs,
    },
    /// The filtration stages of a scenario.
    Filtration {
        #[command(flatten)]
        orbits: OrbitArgs,
        #[arg(long)]
        kmax: Option<usize>,
    },
    /// Filtration against the oracle, with an explicit isomorphism check.
    Compare {
        #[command(flatten)]
        orbits: OrbitArgs,
        #[arg(long)]
        kmax: Option<usize>,
    },
}
