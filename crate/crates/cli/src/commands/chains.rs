use std::path::PathBuf;

use chainlattice::chains::{enumerate_phi, enumerate_phi_star, weighted_sum, weighted_sum_exact};
use chainlattice::io::{format_chain, FamilyDoc};
use chainlattice::{centered, count_k_chains, weight, Result};
use clap::Subcommand;
use serde_json::json;

use super::{ratio, ratio_u64};
use crate::input;
use crate::report::{Outcome, Table};
use crate::Ctx;

#[derive(Subcommand, Debug)]
pub enum Cmd {
    /// Number of k-chains in a family.
    Count {
        #[arg(long)]
        family: PathBuf,
        #[arg(short)]
        n: Option<usize>,
        #[arg(short)]
        k: usize,
    },
    /// Exact weight and shape of one chain, e.g. --chain "1<1,2,3".
    Weight {
        #[arg(short)]
        n: usize,
        #[arg(long, allow_hyphen_values = true)]
        chain: String,
    },
    /// Chains of a family whose steps are at least (or, with --exact, equal to) --steps.
    Phi {
        #[arg(long)]
        family: PathBuf,
        #[arg(short)]
        n: Option<usize>,
        #[arg(long)]
        steps: String,
        #[arg(long)]
        exact: bool,
        /// Chains listed in the report; the count and weight cover all of them.
        #[arg(long, default_value_t = 10_000)]
        limit: usize,
    },
    /// The centered family of size M.
    Centered {
        #[arg(short)]
        n: usize,
        #[arg(short = 'M')]
        m: usize,
        /// Also count its k-chains.
        #[arg(short)]
        k: Option<usize>,
    },
}

pub fn run(cmd: Cmd, _ctx: &Ctx) -> Result<Outcome> {
    match cmd {
        Cmd::Count { family, n, k } => {
            let f = input::read_family(&family, n)?;
            let c = count_k_chains(&f, k)?;
            Outcome::new(&json!({"n": f.n(), "size": f.len(), "k": k, "chains": c.to_string()}))
        }
        Cmd::Weight { n, chain } => {
            let c = input::chain(n, &chain)?;
            let w = weight(&c);
            Outcome::new(&json!({
                "chain": format_chain(&c),
                "codes": c.sets(),
                "sizes": c.sizes(),
                "steps": c.steps().entries(),
                "height": c.height(),
                "distance": ratio_u64(&c.distance()),
                "direction": c.direction(),
                "weight": ratio(w.value()),
            }))
        }
        Cmd::Phi { family, n, steps, exact, limit } => {
            let f = input::read_family(&family, n)?;
            let a = input::steps(&steps)?;
            let (walker, total) = if exact {
                (enumerate_phi_star(&f, &a), weighted_sum_exact(&f, &a))
            } else {
                (enumerate_phi(&f, &a), weighted_sum(&f, &a))
            };
            let mut table = Table::new(&["chain", "weight"]);
            let mut count = 0u64;
            for c in walker {
                if table.rows.len() < limit {
                    table.push(vec![format_chain(&c), ratio(weight(&c).value())]);
                }
                count += 1;
            }
            let listed: Vec<&String> = table.rows.iter().map(|r| &r[0]).collect();
            Ok(Outcome::new(&json!({
                "n": f.n(),
                "steps": a.entries(),
                "exact": exact,
                "count": count,
                "weightedSum": ratio(&total),
                "chains": listed,
                "truncated": count > listed.len() as u64,
            }))?
            .with_table(table))
        }
        Cmd::Centered { n, m, k } => {
            let f = centered(n, m)?;
            let mut out = Outcome::new(&FamilyDoc::from_family(&f))?;
            if let Some(k) = k {
                out = out.with_summary(json!({"k": k, "chains": count_k_chains(&f, k)?.to_string()}));
            }
            Ok(out)
        }
    }
}
