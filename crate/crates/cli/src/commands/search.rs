use chainlattice::search::{ck_min, local_search, verify_conjecture_range};
use chainlattice::{Result, SearchConfig, SearchMode};
use clap::{Args, Subcommand};

use crate::report::{Outcome, Table};
use crate::Ctx;

#[derive(Args, Debug)]
pub struct LocalArgs {
    #[arg(long, default_value_t = 100)]
    restarts: u64,
    /// Swap attempts per restart.
    #[arg(long, default_value_t = 2_000)]
    moves: u64,
    #[arg(long, default_value_t = 8)]
    tabu: usize,
    /// Witnesses kept in the report.
    #[arg(long, default_value_t = 16)]
    witness_cap: usize,
}

#[derive(Subcommand, Debug)]
pub enum Cmd {
    /// Minimum number of k-chains over families of size M.
    Min {
        #[arg(short)]
        n: usize,
        #[arg(short)]
        k: usize,
        #[arg(short = 'M')]
        m: usize,
        /// exhaustive, exhaustive-canonical or local.
        #[arg(long, default_value = "exhaustive")]
        mode: String,
        #[command(flatten)]
        local: LocalArgs,
    },
    /// Exhaustive minimum against the centered family for every M.
    Verify {
        #[arg(short)]
        n: usize,
        #[arg(short)]
        k: usize,
        /// Sweep orbits under coordinate permutations instead of all families.
        #[arg(long)]
        canonical: bool,
    },
    /// Seeded local search for a family of size M with fewer k-chains than the centered one.
    Local {
        #[arg(short)]
        n: usize,
        #[arg(short)]
        k: usize,
        #[arg(short = 'M')]
        m: usize,
        #[command(flatten)]
        local: LocalArgs,
    },
}

fn config(n: usize, k: usize, m: usize, mode: SearchMode, local: &LocalArgs, ctx: &Ctx) -> SearchConfig {
    let mut c = SearchConfig::new(n, k, m, mode);
    c.restarts = local.restarts;
    c.moves = local.moves;
    c.tabu = local.tabu;
    c.witness_cap = local.witness_cap;
    c.seed = ctx.seed;
    c.workers = ctx.workers;
    c
}

pub fn run(cmd: Cmd, ctx: &Ctx) -> Result<Outcome> {
    match cmd {
        Cmd::Min { n, k, m, mode, local } => {
            let r = ck_min(&config(n, k, m, mode.parse()?, &local, ctx))?;
            Ok(Outcome::new(&r)?.failed_if(!r.conjecture_holds))
        }
        Cmd::Local { n, k, m, local } => {
            let r = local_search(&config(n, k, m, SearchMode::LocalSearch, &local, ctx))?;
            Ok(Outcome::new(&r)?.failed_if(!r.conjecture_holds))
        }
        Cmd::Verify { n, k, canonical } => {
            let r = verify_conjecture_range(n, k, canonical)?;
            let mut table = Table::new(&["M", "min", "centered", "holds"]);
            for row in &r.rows {
                table.push(vec![
                    row.m.to_string(),
                    row.min_value.to_string(),
                    row.centered_value.to_string(),
                    row.holds.to_string(),
                ]);
            }
            Ok(Outcome::new(&r)?.with_table(table).failed_if(!r.counterexamples.is_empty()))
        }
    }
}
