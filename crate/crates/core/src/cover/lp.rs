//! Integer program for the core problem in CPLEX LP text format.
//!
//! Variables: `I_k` (identity k is core), `c_k` (k is covered), `a_k`
//! (derivation age of k) and `u_f` (fact f is used). A fact `(i, j, k)`
//! may justify `k` only when `i` and `j` are covered and `a_k` exceeds both
//! `a_i` and `a_j`; with `M = n + 1` the implication is linearized as
//! `a_k - a_i - M u_f >= 1 - M`. Strictly increasing ages along
//! derivations rule out cycles, and heights never exceed `n`, so `M`
//! suffices.

use std::fmt::Write;

use super::CoverageFact;

pub fn emit_lp(n: usize, facts: &[CoverageFact]) -> String {
    let m = n as i64 + 1;
    let mut out = String::new();
    let _ = writeln!(out, "\\ core selection: {n} identities, {} facts", facts.len());
    out.push_str("Minimize\n obj:");
    if n == 0 {
        out.push_str(" 0 I_none");
    }
    for k in 0..n {
        let _ = write!(out, " + I_{k}");
    }
    out.push_str("\nSubject To\n");
    for k in 0..n {
        let _ = write!(out, " just_{k}: c_{k} - I_{k}");
        for (f, fact) in facts.iter().enumerate() {
            if fact.k == k {
                let _ = write!(out, " - u_{f}");
            }
        }
        out.push_str(" <= 0\n");
    }
    for (f, fact) in facts.iter().enumerate() {
        let CoverageFact { i, j, k } = *fact;
        let _ = writeln!(out, " left_{f}: u_{f} - c_{i} <= 0");
        let _ = writeln!(out, " right_{f}: u_{f} - c_{j} <= 0");
        for (tag, part) in [("ageleft", i), ("ageright", j)] {
            if part == k {
                let _ = writeln!(out, " {tag}_{f}: - {m} u_{f} >= {}", 1 - m);
            } else {
                let _ = writeln!(out, " {tag}_{f}: a_{k} - a_{part} - {m} u_{f} >= {}", 1 - m);
            }
        }
    }
    out.push_str("Bounds\n");
    for k in 0..n {
        let _ = writeln!(out, " c_{k} = 1");
        let _ = writeln!(out, " 1 <= a_{k} <= {m}");
    }
    out.push_str("General\n");
    for k in 0..n {
        let _ = writeln!(out, " a_{k}");
    }
    out.push_str("Binary\n");
    for k in 0..n {
        let _ = writeln!(out, " I_{k}");
    }
    for f in 0..facts.len() {
        let _ = writeln!(out, " u_{f}");
    }
    out.push_str("End\n");
    out
}
