use std::path::Path;

use pcgroup::baumslag::{
    blowup_word, conj_bg, division_to_conjugacy, tower_t_power, verify_witness, word_problem, BetaFactorization,
};
use pcgroup::bs12::{conj_bs12, BsConjugacy, BsElement};
use pcgroup::power_circuit::text;
use pcgroup::word::Word;
use serde_json::json;

use crate::{read_input, CliError, Outcome, OutputArgs, DEFAULT_SEED};

fn parse_word(arg: &str, allow_beta: bool) -> Result<Word, CliError> {
    let s = read_input(arg)?;
    Word::parse(&s, allow_beta).map_err(|e| CliError::Input(format!("`{}`: {e}", abbreviate(&s))))
}

fn abbreviate(s: &str) -> String {
    let s = s.trim();
    if s.chars().count() <= 40 {
        s.to_string()
    } else {
        format!("{}...", s.chars().take(40).collect::<String>())
    }
}

fn answer(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

/// Prints a decision in text or JSON.
fn report(command: &str, decision: bool, path: &str, witness: Option<(String, String)>, out: &OutputArgs) {
    if out.json {
        let mut v = json!({
            "command": command,
            "budget": out.budget,
            "seed": DEFAULT_SEED,
            "decision": decision,
            "answer": answer(decision),
            "path": path,
        });
        if let Some((summary, pc)) = witness {
            v["witness"] = json!({ "summary": summary, "pc": pc });
        }
        println!("{v}");
        return;
    }
    println!("{}", out.header(command));
    println!("{}", answer(decision));
    println!("path: {path}");
    if let Some((summary, pc)) = witness {
        println!("witness: {summary}");
        print!("{pc}");
    }
}

pub fn wp(x: &str, y: &str, out: &OutputArgs) -> Result<Outcome, CliError> {
    out.bit_budget()?;
    let x = BetaFactorization::from_word(&parse_word(x, true)?);
    let y = BetaFactorization::from_word(&parse_word(y, true)?);
    let eq = word_problem(&x, &y);
    report("wp", eq, "britton", None, out);
    Ok(Outcome { negative: !eq })
}

pub fn conj(x: &str, y: &str, witness: bool, out: &OutputArgs) -> Result<Outcome, CliError> {
    let budget = out.bit_budget()?;
    let x = BetaFactorization::from_word(&parse_word(x, true)?);
    let y = BetaFactorization::from_word(&parse_word(y, true)?);
    let ans = conj_bg(&x, &y, budget)?;
    let shown = match (&ans.witness, ans.decision) {
        (Some(z), true) => {
            if !verify_witness(&x, &y, z) {
                return Err(CliError::Internal("witness does not conjugate x to y".into()));
            }
            witness.then(|| (format!("{z}"), z.to_pc_text()))
        }
        (None, true) => return Err(CliError::Internal("positive answer without a witness".into())),
        _ => None,
    };
    report("conj", ans.decision, ans.path.name(), shown, out);
    Ok(Outcome { negative: !ans.decision })
}

pub fn bs_conj(x: &str, y: &str, witness: bool, out: &OutputArgs) -> Result<Outcome, CliError> {
    out.bit_budget()?;
    let f = BsElement::eval_word(&parse_word(x, false)?).map_err(|e| CliError::Input(e.to_string()))?;
    let g = BsElement::eval_word(&parse_word(y, false)?).map_err(|e| CliError::Input(e.to_string()))?;
    let res = conj_bs12(&f, &g);
    let shown = match &res {
        BsConjugacy::Yes(z) => {
            if f.conjugate_by(z) != g {
                return Err(CliError::Internal("witness does not conjugate x to y".into()));
            }
            witness.then(|| (z.to_string(), BetaFactorization::from_bs(z).to_pc_text()))
        }
        BsConjugacy::No => None,
    };
    let path = if f.m != g.m { "bs12-t-exponent" } else { "bs12" };
    report("bs-conj", res.is_yes(), path, shown, out);
    Ok(Outcome { negative: !res.is_yes() })
}

pub fn blowup(n: u32, check: bool, out: &OutputArgs) -> Result<Outcome, CliError> {
    let w = blowup_word(n).map_err(|e| CliError::Input(e.to_string()))?;
    let checked = check.then(|| word_problem(&BetaFactorization::from_word(&w), &tower_t_power(n as usize + 1)));
    if out.json {
        let mut v = json!({ "command": "blowup", "n": n, "length": w.len(), "word": w.to_string() });
        if let Some(c) = checked {
            v["equals_tower"] = json!(c);
        }
        println!("{v}");
    } else {
        println!("{}", out.header("blowup"));
        println!("# length={}", w.len());
        if let Some(c) = checked {
            println!("# equals t^tow({}): {}", n + 1, answer(c));
        }
        println!("{w}");
    }
    Ok(Outcome { negative: checked == Some(false) })
}

pub fn divcase(file: &Path, m: &str, s: &str, decide: bool, cap: usize, out: &OutputArgs) -> Result<Outcome, CliError> {
    let budget = out.bit_budget()?;
    let src = std::fs::read_to_string(file).map_err(|e| CliError::Input(format!("{}: {e}", file.display())))?;
    let doc = text::parse(&src).map_err(|e| CliError::Input(format!("{}: {e}", file.display())))?;
    let get = |name: &str| {
        doc.marking(name).cloned().ok_or_else(|| CliError::Input(format!("no marking `{name}`")))
    };
    let (rc, ms) = doc.circuit.reduce(&[get(m)?, get(s)?])?;
    let (x, y) = division_to_conjugacy(&rc, &ms[0], &ms[1], cap).map_err(|e| CliError::Input(e.to_string()))?;
    let decision = if decide {
        let ans = conj_bg(&BetaFactorization::from_word(&x), &BetaFactorization::from_word(&y), budget)?;
        Some((ans.decision, ans.path.name()))
    } else {
        None
    };
    if out.json {
        let mut v = json!({
            "command": "divcase",
            "budget": out.budget,
            "seed": DEFAULT_SEED,
            "x": x.to_string(),
            "y": y.to_string(),
        });
        if let Some((d, p)) = decision {
            v["decision"] = json!(d);
            v["answer"] = json!(answer(d));
            v["path"] = json!(p);
        }
        println!("{v}");
    } else {
        println!("{}", out.header("divcase"));
        println!("x: {x}");
        println!("y: {y}");
        if let Some((d, p)) = decision {
            println!("{}", answer(d));
            println!("path: {p}");
        }
    }
    Ok(Outcome { negative: decision.is_some_and(|d| !d.0) })
}
