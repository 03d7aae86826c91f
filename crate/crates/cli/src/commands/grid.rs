use std::path::PathBuf;

use chainlattice::grid::{counterexample_check, grid_count_chains, m_centered_family, parse_grid_json};
use chainlattice::{Convention, Result};
use clap::{Subcommand, ValueEnum};
use serde_json::json;

use crate::input;
use crate::report::{Outcome, Table};
use crate::Ctx;

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum ConventionArg {
    ZeroBased,
    OneBased,
}

impl From<ConventionArg> for Convention {
    fn from(c: ConventionArg) -> Self {
        match c {
            ConventionArg::ZeroBased => Convention::ZeroBased,
            ConventionArg::OneBased => Convention::OneBased,
        }
    }
}

#[derive(Subcommand, Debug)]
pub enum Cmd {
    /// Comparable pairs in the band of [16]^2 before and after moving (5,6) to (10,0).
    Counterexample,
    /// Number of k-chains in a grid family.
    Count {
        #[arg(long)]
        family: PathBuf,
        #[arg(short)]
        k: usize,
    },
    /// The q points of [m]^d closest to the middle.
    Centered {
        #[arg(short)]
        m: usize,
        #[arg(short)]
        d: usize,
        #[arg(short)]
        q: usize,
        #[arg(long, value_enum, default_value_t = ConventionArg::ZeroBased)]
        convention: ConventionArg,
    },
}

pub fn run(cmd: Cmd, _ctx: &Ctx) -> Result<Outcome> {
    match cmd {
        Cmd::Counterexample => {
            let r = counterexample_check()?;
            let mut table = Table::new(&["convention", "size_f", "size_f_prime", "chains_f", "chains_f_prime", "improved", "note"]);
            for s in &r.sides {
                table.push(vec![
                    s.convention.name().to_string(),
                    s.size_f.to_string(),
                    s.size_f_prime.to_string(),
                    s.chains_f.to_string(),
                    s.chains_f_prime.to_string(),
                    s.improved.to_string(),
                    s.note.clone().unwrap_or_default(),
                ]);
            }
            Ok(Outcome::new(&r)?.with_table(table).failed_if(!r.improved_somewhere))
        }
        Cmd::Count { family, k } => {
            let g = parse_grid_json(&input::read_document(&family)?)?;
            let c = grid_count_chains(&g, k)?;
            Outcome::new(&json!({"m": g.m(), "d": g.d(), "size": g.len(), "k": k, "chains": c.to_string()}))
        }
        Cmd::Centered { m, d, q, convention } => {
            let g = m_centered_family(m, d, q, convention.into())?;
            Outcome::new(&g.to_doc())
        }
    }
}
