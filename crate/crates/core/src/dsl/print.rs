use std::fmt::Write;

use super::{Expr, Suite};
use crate::scalar::Scalar;

const ATOM: u8 = 4;

fn level(e: &Expr) -> u8 {
    match e {
        Expr::Add(..) | Expr::Sub(..) => 0,
        Expr::Mul(..) | Expr::Div(..) => 1,
        Expr::Neg(_) => 2,
        Expr::Pow(..) => 3,
        _ => ATOM,
    }
}

fn wrapped(s: &str) -> bool {
    if !s.starts_with('(') {
        return false;
    }
    let mut depth = 0i32;
    for (k, c) in s.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => {
                depth -= 1;
                if depth == 0 {
                    return k == s.len() - 1;
                }
            }
            _ => {}
        }
    }
    false
}

fn scalar_atom(s: &Scalar) -> String {
    let text = s.to_string();
    let simple = text.chars().all(|c| c.is_ascii_digit()) || text == "t" || text == "i";
    if simple || wrapped(&text) {
        text
    } else {
        format!("({text})")
    }
}

fn operand(out: &mut String, e: &Expr, min: u8) {
    if level(e) < min {
        out.push('(');
        write_expr(out, e);
        out.push(')');
    } else {
        write_expr(out, e);
    }
}

fn write_expr(out: &mut String, e: &Expr) {
    match e {
        Expr::Scalar(s) => out.push_str(&scalar_atom(s)),
        Expr::Name { name, args, kwargs } => {
            out.push_str(name);
            if !(args.is_empty() && kwargs.is_empty()) {
                let parts: Vec<String> = args
                    .iter()
                    .map(|a| a.to_string())
                    .chain(kwargs.iter().map(|(k, v)| format!("{k}={v}")))
                    .collect();
                let _ = write!(out, "({})", parts.join(", "));
            }
        }
        Expr::Add(a, b) | Expr::Sub(a, b) => {
            operand(out, a, 0);
            out.push_str(if matches!(e, Expr::Add(..)) { " + " } else { " - " });
            operand(out, b, 1);
        }
        Expr::Mul(a, b) | Expr::Div(a, b) => {
            operand(out, a, 1);
            out.push_str(if matches!(e, Expr::Mul(..)) { " * " } else { " / " });
            operand(out, b, 2);
        }
        Expr::Neg(a) => {
            out.push('-');
            operand(out, a, 2);
        }
        Expr::Pow(a, k) => {
            operand(out, a, ATOM);
            let _ = write!(out, "^{k}");
        }
        Expr::Comm(a, b) | Expr::AntiComm(a, b) => {
            let (open, close) = if matches!(e, Expr::Comm(..)) { ('[', ']') } else { ('{', '}') };
            out.push(open);
            write_expr(out, a);
            out.push_str(", ");
            write_expr(out, b);
            out.push(close);
        }
        Expr::QComm(a, b, x) => {
            out.push_str("qcomm(");
            write_expr(out, a);
            out.push_str(", ");
            write_expr(out, b);
            let _ = write!(out, "; {x})");
        }
    }
}

/// Renders an expression so that parsing the output yields the same tree.
pub fn print_expr(e: &Expr) -> String {
    let mut out = String::new();
    write_expr(&mut out, e);
    out
}

/// Renders a suite in canonical `.qsuite` form.
pub fn print_suite(s: &Suite) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "suite {}", s.name);
    let _ = writeln!(out, "modes {}", s.modes);
    if !s.bindings.is_empty() {
        out.push('\n');
    }
    for b in &s.bindings {
        let _ = writeln!(out, "let {} = {}", b.name, print_expr(&b.expr));
    }
    if !s.relations.is_empty() {
        out.push('\n');
    }
    for r in &s.relations {
        let _ = write!(out, "assert {}: {} == {}", r.name, print_expr(&r.lhs), print_expr(&r.rhs));
        if let Some(m) = r.margin {
            let _ = write!(out, " @margin={m}");
        }
        if let Some(m) = r.mode {
            let _ = write!(out, " @mode={m}");
        }
        if let Some(k) = r.samples {
            let _ = write!(out, " @samples={k}");
        }
        out.push('\n');
    }
    out
}
