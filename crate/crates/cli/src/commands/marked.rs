use rand::seq::SliceRandom;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use props_engine::marked::{classify_marking, enumerate_reduced, reduce, reduce_in_order};
use props_engine::schemes::PastingScheme;
use props_engine::{ColorSet, ProfilePair};

use crate::args::MarkedCmd;
use crate::io::read_marked;
use crate::{CliResult, Context, Report};

pub fn run(ctx: &mut Context, cmd: &MarkedCmd) -> CliResult<Report> {
    match cmd {
        MarkedCmd::Classify => {
            let (_, m) = read_marked(&ctx.input_text()?)?;
            Ok(Report::ok(json!({ "class": classify_marking(&m).name() })))
        }
        MarkedCmd::Reduce { scheme, orders } => {
            let s = PastingScheme::by_name(&scheme.scheme)?;
            let (colors, m) = read_marked(&ctx.input_text()?)?;
            let red = reduce(&m, &s)?;
            let key = red.reduced.key();
            let mut rng = ChaCha8Rng::seed_from_u64(ctx.cli.seed);
            let mut agree = true;
            for _ in 0..*orders {
                let mut order = red.edges.clone();
                order.shuffle(&mut rng);
                agree &= reduce_in_order(&m, &order)?.reduced.key() == key;
            }
            let mut out = red.reduced.to_json(&colors);
            out["key"] = json!(key);
            out["shrunk_edges"] = json!(red.edges);
            out["class"] = json!(classify_marking(&red.reduced).name());
            if *orders > 0 {
                out["orders_checked"] = json!(orders);
                out["order_independent"] = json!(agree);
            }
            let dot = red.reduced.graph.to_dot(Some(&colors));
            Ok(Report::check(agree, out).with_dot(dot))
        }
        MarkedCmd::Enumerate {
            scheme,
            colors,
            r,
            s,
            k,
        } => {
            let scheme = PastingScheme::by_name(&scheme.scheme)?;
            let colors = ColorSet::new(colors.iter().cloned())?;
            let r = ProfilePair::parse(r, &colors)?;
            let s = ProfilePair::parse(s, &colors)?;
            let classes = enumerate_reduced(&scheme, &r, &s, *k, &ctx.budget)?;
            Ok(Report::ok(json!({
                "scheme": scheme.name(),
                "r": r.display(&colors),
                "s": s.display(&colors),
                "k": k,
                "count": classes.len(),
                "classes": classes.iter().map(|c| c.to_json(&colors)).collect::<Vec<_>>(),
            })))
        }
    }
}
