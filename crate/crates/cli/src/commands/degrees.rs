use chainlattice::degrees::{crude_degree_bound, degree_brute, degree_formula, max_degree, max_degree_sandwich};
use chainlattice::io::format_set;
use chainlattice::lattice::middle_layers;
use chainlattice::{count_k_chains, Result};
use clap::Subcommand;
use num_bigint::BigUint;
use serde_json::json;

use super::ratio;
use crate::input;
use crate::report::{Outcome, Table};
use crate::Ctx;

#[derive(Subcommand, Debug)]
pub enum Cmd {
    /// Largest degree in the k-chain hypergraph on the j middle layers.
    Delta {
        #[arg(short)]
        n: usize,
        #[arg(short)]
        j: usize,
        #[arg(short)]
        k: usize,
    },
    /// Closed-form degree of one vertex against brute-force enumeration.
    Vertex {
        #[arg(short)]
        n: usize,
        #[arg(short)]
        j: usize,
        #[arg(short)]
        k: usize,
        #[arg(long, allow_hyphen_values = true)]
        set: String,
    },
    /// Closed form against brute force for every vertex, j <= n + 1 and k <= --max-k,
    /// plus the handshake identity.
    Check {
        #[arg(short)]
        n: usize,
        #[arg(long, default_value_t = 4)]
        max_k: usize,
    },
}

pub fn run(cmd: Cmd, _ctx: &Ctx) -> Result<Outcome> {
    match cmd {
        Cmd::Delta { n, j, k } => {
            let (delta, witness) = max_degree(j, k, n)?;
            let sandwich = max_degree_sandwich(j, k, n).ok();
            Outcome::new(&json!({
                "n": n,
                "j": j,
                "k": k,
                "delta": delta.to_string(),
                "witness": format_set(witness),
                "sandwichLower": sandwich.as_ref().map(|s| ratio(&s.0)),
                "sandwichUpper": sandwich.as_ref().map(|s| ratio(&s.1)),
                "crudeBound": crude_degree_bound(n, j, k).to_string(),
            }))
        }
        Cmd::Vertex { n, j, k, set } => {
            let code = input::set(n, &set)?;
            let formula = degree_formula(n, code, j, k)?;
            let brute = degree_brute(n, code, j, k)?;
            let equal = formula == brute;
            Ok(Outcome::new(&json!({
                "set": format_set(code),
                "formula": formula.to_string(),
                "brute": brute.to_string(),
                "equal": equal,
            }))?
            .failed_if(!equal))
        }
        Cmd::Check { n, max_k } => {
            let mut table = Table::new(&["j", "k", "vertices", "mismatches", "handshake"]);
            let mut rows = Vec::new();
            let mut failures = 0;
            for j in 1..=n + 1 {
                let verts = middle_layers(n, j)?;
                for k in 1..=max_k {
                    let mut mismatches = 0u64;
                    let mut sum = BigUint::default();
                    for v in verts.iter() {
                        let f = degree_formula(n, v, j, k)?;
                        if f != degree_brute(n, v, j, k)? {
                            mismatches += 1;
                        }
                        sum += f;
                    }
                    let handshake = sum == count_k_chains(&verts, k)? * BigUint::from(k);
                    failures += usize::from(mismatches > 0 || !handshake);
                    table.push(vec![
                        j.to_string(),
                        k.to_string(),
                        verts.len().to_string(),
                        mismatches.to_string(),
                        handshake.to_string(),
                    ]);
                    rows.push(json!({"j": j, "k": k, "vertices": verts.len(), "mismatches": mismatches, "handshake": handshake}));
                }
            }
            Ok(Outcome::new(&json!({"n": n, "maxK": max_k, "failures": failures, "rows": rows}))?
                .with_table(table)
                .failed_if(failures > 0))
        }
    }
}
