use std::cmp::Ordering;
use std::path::{Path, PathBuf};

use clap::{Args, Subcommand};
use pcgroup::power_circuit::text::{self, ParseError, PcDocument};
use pcgroup::power_circuit::{Marking, ReducedCircuit};
use serde_json::json;

use crate::{CliError, Outcome, OutputArgs};

#[derive(Subcommand)]
pub enum PcOp {
    /// Check acyclicity and integrality.
    Validate { file: PathBuf, #[command(flatten)] out: OutputArgs },
    /// Expand a marking to a decimal integer.
    Eval { file: PathBuf, m: String, #[command(flatten)] out: OutputArgs },
    /// M1 + M2, or M1 - M2 with --sub.
    Add {
        #[command(flatten)]
        two: Two,
        #[arg(long)]
        sub: bool,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Compare M1 with M2.
    Cmp { #[command(flatten)] two: Two, #[command(flatten)] out: OutputArgs },
    /// 2^M1 * M2.
    Mulpow2 { #[command(flatten)] two: Two, #[command(flatten)] out: OutputArgs },
    /// Split M = 2^X * U with U odd.
    Odd { file: PathBuf, m: String, #[command(flatten)] out: OutputArgs },
    /// Whether M1 divides M2.
    Divides { #[command(flatten)] two: Two, #[command(flatten)] out: OutputArgs },
    /// Rewrite the circuit in reduced form.
    Reduce { file: PathBuf, #[command(flatten)] out: OutputArgs },
}

#[derive(Args)]
pub struct Two {
    file: PathBuf,
    m1: String,
    m2: String,
}

fn load(path: &Path) -> Result<PcDocument, CliError> {
    let src = std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    text::parse(&src).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn marking(doc: &PcDocument, name: &str) -> Result<Marking, CliError> {
    doc.marking(name).cloned().ok_or_else(|| CliError::Input(format!("no marking `{name}`")))
}

/// The named markings of a file, moved onto its reduced circuit.
fn reduced(path: &Path, names: &[&str]) -> Result<(ReducedCircuit, Vec<Marking>), CliError> {
    let doc = load(path)?;
    let ms = names.iter().map(|n| marking(&doc, n)).collect::<Result<Vec<_>, _>>()?;
    Ok(doc.circuit.reduce(&ms)?)
}

/// Prints markings as a compact `pc v1` file, with values where they fit.
fn emit(rc: &ReducedCircuit, named: &[(&str, Marking)], command: &str, out: &OutputArgs) -> Result<(), CliError> {
    let budget = out.bit_budget()?;
    let ms: Vec<Marking> = named.iter().map(|(_, m)| m.clone()).collect();
    let (small, ms) = rc.compact(&ms);
    let pairs: Vec<(&str, &Marking)> = named.iter().map(|(n, _)| *n).zip(ms.iter()).collect();
    let body = text::serialize(small.circuit(), &pairs);
    let values: Vec<(String, Option<String>)> = named
        .iter()
        .zip(&ms)
        .map(|((n, _), m)| (n.to_string(), small.evaluate(m, budget).ok().map(|v| v.to_string())))
        .collect();
    if out.json {
        let vals: serde_json::Map<String, serde_json::Value> =
            values.into_iter().map(|(n, v)| (n, json!(v))).collect();
        println!("{}", json!({ "command": command, "budget": out.budget, "values": vals, "pc": body }));
    } else {
        println!("{}", out.header(command));
        for (n, v) in values {
            println!("# {n} = {}", v.as_deref().unwrap_or("(beyond budget)"));
        }
        print!("{body}");
    }
    Ok(())
}

fn print_value(command: &str, key: &str, value: serde_json::Value, plain: &str, out: &OutputArgs) {
    if out.json {
        println!("{}", json!({ "command": command, "budget": out.budget, key: value }));
    } else {
        println!("{}", out.header(command));
        println!("{plain}");
    }
}

pub fn run(op: PcOp) -> Result<(Outcome, bool), CliError> {
    match op {
        PcOp::Validate { file, out } => {
            let src = std::fs::read_to_string(&file).map_err(|e| CliError::Input(format!("{}: {e}", file.display())))?;
            let (ok, why) = match text::parse(&src) {
                Ok(doc) => {
                    let ms: Vec<Marking> = doc.markings.iter().map(|(_, m)| m.clone()).collect();
                    (doc.circuit.validate(&ms)?, None)
                }
                Err(e @ (ParseError::Cycle { .. } | ParseError::NotIntegral { .. })) => (false, Some(e.to_string())),
                Err(e) => return Err(CliError::Input(format!("{}: {e}", file.display()))),
            };
            let plain = match &why {
                Some(w) => format!("false ({w})"),
                None => ok.to_string(),
            };
            print_value("pc validate", "valid", json!(ok), &plain, &out);
            Ok((Outcome { negative: !ok }, out.exit_code))
        }
        PcOp::Eval { file, m, out } => {
            let budget = out.bit_budget()?;
            let doc = load(&file)?;
            let v = doc.circuit.evaluate(&marking(&doc, &m)?, budget)?;
            print_value("pc eval", "value", json!(v.to_string()), &v.to_string(), &out);
            Ok((Outcome { negative: false }, out.exit_code))
        }
        PcOp::Add { two, sub, out } => {
            let (mut rc, ms) = reduced(&two.file, &[&two.m1, &two.m2])?;
            let r = if sub { rc.sub(&ms[0], &ms[1]) } else { rc.add(&ms[0], &ms[1]) };
            emit(&rc, &[("R", r)], "pc add", &out)?;
            Ok((Outcome { negative: false }, out.exit_code))
        }
        PcOp::Cmp { two, out } => {
            let (rc, ms) = reduced(&two.file, &[&two.m1, &two.m2])?;
            let word = match rc.compare(&ms[0], &ms[1]) {
                Ordering::Less => "less",
                Ordering::Equal => "equal",
                Ordering::Greater => "greater",
            };
            print_value("pc cmp", "order", json!(word), word, &out);
            Ok((Outcome { negative: false }, out.exit_code))
        }
        PcOp::Mulpow2 { two, out } => {
            let (mut rc, ms) = reduced(&two.file, &[&two.m1, &two.m2])?;
            let r = rc.mul_pow2(&ms[0], &ms[1])?;
            emit(&rc, &[("R", r)], "pc mulpow2", &out)?;
            Ok((Outcome { negative: false }, out.exit_code))
        }
        PcOp::Odd { file, m, out } => {
            let (mut rc, ms) = reduced(&file, &[&m])?;
            let (x, u) = rc.decompose_odd(&ms[0]);
            emit(&rc, &[("X", x), ("U", u)], "pc odd", &out)?;
            Ok((Outcome { negative: false }, out.exit_code))
        }
        PcOp::Divides { two, out } => {
            let budget = out.bit_budget()?;
            let (rc, ms) = reduced(&two.file, &[&two.m1, &two.m2])?;
            let d = rc.divides(&ms[0], &ms[1], budget)?;
            print_value("pc divides", "divides", json!(d), &d.to_string(), &out);
            Ok((Outcome { negative: !d }, out.exit_code))
        }
        PcOp::Reduce { file, out } => {
            let doc = load(&file)?;
            let ms: Vec<Marking> = doc.markings.iter().map(|(_, m)| m.clone()).collect();
            let (rc, ms) = doc.circuit.reduce(&ms)?;
            let named: Vec<(&str, Marking)> = doc.markings.iter().map(|(n, _)| n.as_str()).zip(ms).collect();
            emit(&rc, &named, "pc reduce", &out)?;
            Ok((Outcome { negative: false }, out.exit_code))
        }
    }
}
