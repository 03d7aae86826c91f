use std::path::PathBuf;

use chainlattice::supersat::{d_param, hat_f, is_q_good, msh_to_json, parse_msh_json, step_classes, verify_supersat};
use chainlattice::{Family, MeasuredSubhypergraph, Result};
use clap::Subcommand;
use serde_json::{json, Value};

use super::ratio;
use crate::input;
use crate::report::{Outcome, Table};
use crate::Ctx;

#[derive(Subcommand, Debug)]
pub enum Cmd {
    /// Compares W_a(F) with W_a of the centered family of the same size, for every step vector.
    Check {
        #[arg(long)]
        family: PathBuf,
        #[arg(short)]
        n: Option<usize>,
        #[arg(short)]
        k: usize,
        /// Only this step vector.
        #[arg(long)]
        steps: Option<String>,
    },
    /// The greedy measure inside the middle layers that avoids a forbidden family.
    Hatf {
        #[arg(short)]
        n: usize,
        #[arg(short)]
        k: usize,
        #[arg(short = 'M')]
        m: usize,
        /// Number of middle layers; defaults to min(n + 1, ⌊10 k √(n ln n)⌋).
        #[arg(short)]
        d: Option<usize>,
        /// Forbidden sets; empty when omitted.
        #[arg(long)]
        forbidden: Option<PathBuf>,
    },
    /// Whether a measure is Q-good.
    Good {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(short = 'Q')]
        q: usize,
        /// Sets the measure may use; all vertices of its hypergraph when omitted.
        #[arg(long)]
        family: Option<PathBuf>,
    },
}

pub fn read_msh(path: &std::path::Path) -> Result<MeasuredSubhypergraph> {
    parse_msh_json(&input::read_document(path)?)
}

pub fn msh_value(f: &MeasuredSubhypergraph) -> Value {
    serde_json::from_str(&msh_to_json(f)).expect("valid json")
}

pub fn within(path: Option<&PathBuf>, f: &MeasuredSubhypergraph) -> Result<Family> {
    match path {
        Some(p) => input::read_family(p, Some(f.host().n)),
        None => Ok(f.host().vertices()),
    }
}

pub fn run(cmd: Cmd, _ctx: &Ctx) -> Result<Outcome> {
    match cmd {
        Cmd::Check { family, n, k, steps } => {
            let f = input::read_family(&family, n)?;
            let classes = match steps {
                Some(s) => vec![input::steps(&s)?],
                None => step_classes(&Family::full(f.n())?, k),
            };
            let mut table = Table::new(&["steps", "family", "centered", "holds"]);
            let mut rows = Vec::new();
            let mut violations = 0;
            for a in &classes {
                let c = verify_supersat(&f, a)?;
                violations += usize::from(!c.ok);
                table.push(vec![a.to_string(), ratio(&c.lhs), ratio(&c.rhs), c.ok.to_string()]);
                rows.push(json!({"steps": a.entries(), "family": ratio(&c.lhs), "centered": ratio(&c.rhs), "holds": c.ok}));
            }
            Ok(Outcome::new(&json!({
                "n": f.n(),
                "size": f.len(),
                "k": k,
                "violations": violations,
                "rows": rows,
            }))?
            .with_table(table)
            .failed_if(violations > 0))
        }
        Cmd::Hatf { n, k, m, d, forbidden } => {
            let d = d.unwrap_or_else(|| d_param(n, k));
            let c = match forbidden {
                Some(p) => input::read_family(&p, Some(n))?,
                None => Family::empty(n)?,
            };
            let h = hat_f(&c, m, n, d, k)?;
            Ok(Outcome::new(&msh_value(&h.measure))?.with_summary(json!({
                "inRegime": h.in_regime,
                "forbidden": c.len(),
                "size": ratio(&h.measure.size()),
            })))
        }
        Cmd::Good { input, q, family } => {
            let f = read_msh(&input)?;
            let w = within(family.as_ref(), &f)?;
            let v = is_q_good(&f, q, &w)?;
            Outcome::new(&json!({
                "q": q,
                "good": v.good,
                "witness": v.witness.map(|a| a.entries().to_vec()),
                "constraintsChecked": v.constraints_checked,
            }))
        }
    }
}
