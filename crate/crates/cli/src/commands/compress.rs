use std::path::PathBuf;

use chainlattice::supersat::{compress, fully_compress, is_completely_compressed, is_compressed};
use chainlattice::Result;
use clap::Subcommand;
use serde_json::json;

use super::ratio;
use super::supersat::{msh_value, read_msh, within};
use crate::input;
use crate::report::Outcome;
use crate::Ctx;

#[derive(Subcommand, Debug)]
pub enum Cmd {
    /// Compresses one step class, or every class until stable when --steps is omitted.
    Apply {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        family: Option<PathBuf>,
        #[arg(long)]
        steps: Option<String>,
    },
    /// Whether a measure is compressed on one class, or on all of them.
    Check {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        family: Option<PathBuf>,
        #[arg(long)]
        steps: Option<String>,
    },
}

pub fn run(cmd: Cmd, _ctx: &Ctx) -> Result<Outcome> {
    match cmd {
        Cmd::Apply { input, family, steps } => {
            let f = read_msh(&input)?;
            let w = within(family.as_ref(), &f)?;
            let g = match &steps {
                Some(s) => compress(&f, &w, &input::steps(s)?)?,
                None => fully_compress(&f, &w)?,
            };
            Ok(Outcome::new(&msh_value(&g))?
                .with_summary(json!({"sizeBefore": ratio(&f.size()), "sizeAfter": ratio(&g.size())})))
        }
        Cmd::Check { input, family, steps } => {
            let f = read_msh(&input)?;
            let w = within(family.as_ref(), &f)?;
            let ok = match &steps {
                Some(s) => is_compressed(&f, &w, &input::steps(s)?)?,
                None => is_completely_compressed(&f, &w)?,
            };
            Ok(Outcome::new(&json!({"steps": steps, "compressed": ok}))?.failed_if(!ok))
        }
    }
}
