//! Sessions saved as scripts: one `sN = expr` line per state, then the
//! user's names. Loading re-evaluates the lines, so every state comes back
//! with the same id and, on the same dataset, the same paths.

use std::fmt::Write;
use std::sync::Arc;

use super::{Binding, Session};
use crate::dsl::{self, Expr};
use crate::error::{Error, Result};
use crate::model::Dataset;

pub const DATASET_HEADER: &str = "#dataset ";

pub(super) fn save(s: &Session) -> String {
    let mut out = format!("{DATASET_HEADER}{}\n", s.fingerprint());
    for st in &s.states {
        // Back-propagated states are recreated by their refine's `!`.
        if let Some(e) = st.intention.to_expr() {
            let _ = writeln!(out, "s{} = {}", st.id, dsl::print_expr(&e));
        }
    }
    if !s.names.is_empty() {
        out.push_str("# names\n");
    }
    for (name, b) in &s.names {
        if let Binding::State(id) = b {
            let _ = writeln!(out, "{name} = s{id}");
        }
    }
    out
}

fn state_number(name: &str) -> Option<usize> {
    name.strip_prefix('s').filter(|d| !d.is_empty() && d.bytes().all(|b| b.is_ascii_digit()))?.parse().ok()
}

pub(super) fn load(dataset: Arc<Dataset>, text: &str) -> Result<Session> {
    let mut s = Session::new(dataset);
    let header = text.lines().find(|l| !l.trim().is_empty());
    match header.and_then(|l| l.trim().strip_prefix(DATASET_HEADER.trim_end())) {
        Some(fp) => {
            let fp = fp.trim();
            if fp != s.fingerprint() {
                return Err(Error::Fingerprint { expected: fp.to_string(), found: s.fingerprint().to_string() });
            }
        }
        None => return Err(Error::arg("saved session must start with a #dataset line")),
    }
    let script = dsl::parse_script(text)?;
    for st in &script.stmts {
        let numbered = st.target.as_deref().and_then(state_number);
        match numbered {
            // A line defining the next state; it is looked up by number,
            // not bound as a name.
            Some(n) if n == s.len() => {
                let anon = dsl::Stmt { target: None, ..st.clone() };
                s.eval_stmt(&anon)?;
                if s.len() <= n {
                    return Err(Error::arg(format!("line for s{n} did not create a state")).at(st.loc.0));
                }
            }
            Some(n) if n > s.len() && !matches!(st.expr, Expr::Source(..)) => {
                return Err(Error::arg(format!("line for s{n} found where s{} was expected", s.len())).at(st.loc.0));
            }
            _ => {
                s.eval_stmt(st)?;
            }
        }
    }
    Ok(s)
}
