use serde_json::json;

use props_engine::sample::Sampler;
use props_engine::schemes::{check_axioms, check_shrinkable, Bound, PastingScheme};
use props_engine::ColorSet;

use crate::args::{BoundArgs, SchemeCmd};
use crate::io::read_graph;
use crate::{CliResult, Context, Report};

fn bound(b: &BoundArgs) -> Bound {
    Bound::new(b.max_vertices, b.max_flags, b.colors)
}

pub fn run(ctx: &mut Context, cmd: &SchemeCmd) -> CliResult<Report> {
    match cmd {
        SchemeCmd::Member { scheme } => {
            let s = PastingScheme::by_name(&scheme.scheme)?;
            let (_, g, _) = read_graph(&ctx.input_text()?)?;
            let member = s.member(&g);
            Ok(Report::check(member, json!({ "scheme": s.name(), "member": member })))
        }
        SchemeCmd::CheckAxioms {
            scheme,
            bound: b,
            samples,
        } => {
            let s = PastingScheme::by_name(&scheme.scheme)?;
            let colors = ColorSet::anonymous(b.colors);
            let reports = check_axioms(&s, bound(b), &ctx.budget);
            let mut pass = reports.iter().all(|r| r.passed());
            let mut out = json!({
                "scheme": s.name(),
                "bound": bound(b),
                "axioms": reports.iter().map(|r| r.to_json(&colors)).collect::<Vec<_>>(),
            });
            if *samples > 0 {
                let laws = Sampler::new(&s, bound(b), ctx.cli.seed, &ctx.budget)?.check_laws(*samples);
                pass &= laws.passed();
                out["sampled_laws"] = json!({ "seed": ctx.cli.seed, "report": laws });
            }
            Ok(Report::check(pass, out))
        }
        SchemeCmd::CheckShrink { scheme, bound: b } => {
            let s = PastingScheme::by_name(&scheme.scheme)?;
            let colors = ColorSet::anonymous(b.colors);
            let r = check_shrinkable(&s, bound(b), &ctx.budget);
            let mut out = r.to_json(&colors);
            out["bound"] = json!(bound(b));
            out["witness_key"] = json!(r.witness.as_ref().map(|w| props_engine::graph::canonical_key(w, &[])));
            Ok(Report::check(r.passed(), out))
        }
    }
}
