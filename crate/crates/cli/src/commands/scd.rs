use std::path::PathBuf;

use chainlattice::io::{format_chain, json_error};
use chainlattice::scd::{chain_through, dbtk_scd, enumerate_all_scds, exact_containment_fraction, mc_weight, sample_scd, ScdDoc};
use chainlattice::{weight, Error, Result};
use clap::Subcommand;
use num_traits::ToPrimitive;
use serde_json::json;

use super::{ratio, ratio_u64};
use crate::input;
use crate::report::{Outcome, Table};
use crate::Ctx;

#[derive(Subcommand, Debug)]
pub enum Cmd {
    /// The canonical decomposition of P(n), or a random relabeling of it with --sample.
    Build {
        #[arg(short)]
        n: usize,
        #[arg(long)]
        sample: bool,
    },
    /// Checks that a decomposition file is a symmetric chain decomposition.
    Check {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Monte Carlo estimate of the probability that a random decomposition contains a chain.
    Mc {
        #[arg(short)]
        n: usize,
        #[arg(long, allow_hyphen_values = true)]
        chain: String,
        #[arg(long, default_value_t = 1_000_000)]
        trials: u64,
    },
    /// Exact fraction of all decompositions containing a chain (n <= 4).
    Exact {
        #[arg(short)]
        n: usize,
        #[arg(long, allow_hyphen_values = true)]
        chain: String,
    },
    /// The canonical chain through one set.
    Through {
        #[arg(short)]
        n: usize,
        #[arg(long, allow_hyphen_values = true)]
        set: String,
    },
}

pub fn run(cmd: Cmd, ctx: &Ctx) -> Result<Outcome> {
    match cmd {
        Cmd::Build { n, sample } => {
            let scd = if sample { sample_scd(n, ctx.seed)? } else { dbtk_scd(n)? };
            Ok(Outcome::new(&scd.to_doc())?
                .with_summary(json!({"chains": scd.chains().len(), "sampled": sample})))
        }
        Cmd::Check { input } => {
            let text = input::read_document(&input)?;
            let doc: ScdDoc = serde_json::from_str(&text).map_err(json_error)?;
            let (valid, problem) = match doc.to_scd() {
                Ok(_) => (true, None),
                Err(Error::Domain(msg)) => (false, Some(msg)),
                Err(e) => return Err(e),
            };
            Ok(Outcome::new(&json!({
                "n": doc.n,
                "chains": doc.chains.len(),
                "valid": valid,
                "problem": problem,
            }))?
            .failed_if(!valid))
        }
        Cmd::Mc { n, chain, trials } => {
            let c = input::chain(n, &chain)?;
            let est = mc_weight(&c, trials, ctx.seed, ctx.workers)?;
            let w = weight(&c);
            let wf = w.value().to_f64().unwrap_or(f64::NAN);
            let se = (wf * (1.0 - wf) / trials as f64).sqrt();
            let dev = (est.frequency_f64() - wf).abs();
            Outcome::new(&json!({
                "chain": format_chain(&c),
                "trials": est.trials,
                "hits": est.hits,
                "frequency": ratio_u64(&est.frequency),
                "weight": ratio(w.value()),
                "sampleStderr": est.stderr,
                "deviationInStderrs": if se > 0.0 { dev / se } else if dev == 0.0 { 0.0 } else { f64::INFINITY },
            }))
        }
        Cmd::Exact { n, chain } => {
            let c = input::chain(n, &chain)?;
            let all = enumerate_all_scds(n)?;
            let frac = exact_containment_fraction(&all, &c)?;
            let w = weight(&c);
            let equal = &frac == w.value();
            Ok(Outcome::new(&json!({
                "chain": format_chain(&c),
                "decompositions": all.len(),
                "fraction": ratio(&frac),
                "weight": ratio(w.value()),
                "equal": equal,
            }))?
            .failed_if(!equal))
        }
        Cmd::Through { n, set } => {
            let x = input::set(n, &set)?;
            let c = chain_through(n, x)?;
            let mut table = Table::new(&["code", "set"]);
            for &s in c.sets() {
                table.push(vec![s.to_string(), chainlattice::io::format_set(s)]);
            }
            Ok(Outcome::new(&json!({"chain": format_chain(&c), "codes": c.sets()}))?.with_table(table))
        }
    }
}

