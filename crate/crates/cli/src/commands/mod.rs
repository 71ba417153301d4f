mod equi;
mod graph;
mod marked;
mod ops;
mod prop;
mod scheme;

use crate::args::Command;
use crate::{CliResult, Context, Report};

pub fn dispatch(ctx: &mut Context) -> CliResult<Report> {
    match &ctx.cli.command {
        Command::Graph(c) => graph::run(ctx, c),
        Command::Ops(c) => ops::run(ctx, c),
        Command::Scheme(c) => scheme::run(ctx, c),
        Command::Marked(c) => marked::run(ctx, c),
        Command::Equi(c) => equi::run(ctx, c),
        Command::Prop(c) => prop::run(ctx, c),
    }
}
