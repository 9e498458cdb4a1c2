//! Verification suites built from the symbolic oracle.

use lightcone_oracle::{
    verify_chain_formula, verify_fiber_moves, verify_highest_weight_vectors,
    verify_invariant_pairing, verify_transition_formula, verify_unitary_transitions,
    VerificationReport,
};
use serde::Serialize;

use crate::args::Suite;
use crate::error::CliError;
use crate::sweep::parallel_map;

/// Suites in the order they are run and reported.
pub const SUITES: [Suite; 6] = [
    Suite::Transition,
    Suite::Chain,
    Suite::UnitaryTransitions,
    Suite::FiberMoves,
    Suite::HighestWeight,
    Suite::Pairing,
];

/// One oracle call.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Case {
    Transition {
        p: u32,
        q: u32,
        m: u32,
        n: u32,
    },
    Chain {
        p: u32,
        m: u32,
    },
    UnitaryTransitions {
        p: u32,
        q: u32,
        b: (u32, u32, u32, u32),
    },
    FiberMoves {
        p: u32,
        q: u32,
        e: (u32, u32, u32, u32, u32),
    },
    HighestWeight {
        p: u32,
        xi1: u32,
        xi2: u32,
    },
    Pairing {
        p: u32,
        q: u32,
        m: u32,
        n: u32,
    },
}

/// Default `(max_pq, max_deg)` of a suite.
pub fn default_bounds(suite: Suite) -> (u32, u32) {
    match suite {
        Suite::Transition => (3, 3),
        Suite::Chain => (4, 3),
        Suite::UnitaryTransitions => (2, 2),
        Suite::FiberMoves => (2, 2),
        Suite::HighestWeight => (2, 3),
        Suite::Pairing => (3, 2),
        Suite::All => (0, 0),
    }
}

fn signatures(lo: u32, max_pq: u32) -> Vec<(u32, u32)> {
    let mut out = Vec::new();
    for p in lo..=max_pq {
        for q in lo..=p {
            out.push((p, q));
        }
    }
    out
}

/// Oracle calls of one suite.
pub fn cases(suite: Suite, max_pq: Option<u32>, max_deg: Option<u32>) -> Vec<Case> {
    let (dpq, ddeg) = default_bounds(suite);
    let (pq, deg) = (max_pq.unwrap_or(dpq), max_deg.unwrap_or(ddeg));
    let mut out = Vec::new();
    match suite {
        Suite::Transition | Suite::Pairing => {
            for (p, q) in signatures(2, pq) {
                for m in 0..=deg {
                    for n in 0..=deg {
                        out.push(if suite == Suite::Transition {
                            Case::Transition { p, q, m, n }
                        } else {
                            Case::Pairing { p, q, m, n }
                        });
                    }
                }
            }
        }
        Suite::Chain => {
            for p in 3..=pq.max(3) {
                for m in 0..=deg {
                    out.push(Case::Chain { p, m });
                }
            }
        }
        Suite::UnitaryTransitions => {
            for (p, q) in signatures(2, pq) {
                for m in 0..=deg {
                    for n in 0..=deg {
                        for m1 in 0..=m {
                            for n1 in 0..=n {
                                out.push(Case::UnitaryTransitions {
                                    p,
                                    q,
                                    b: (m1, m - m1, n1, n - n1),
                                });
                            }
                        }
                    }
                }
            }
        }
        Suite::FiberMoves => {
            for (p, q) in signatures(2, pq) {
                for a1 in 0..=deg {
                    for a2 in 0..=deg {
                        for b1 in 0..=deg {
                            for b2 in 0..=deg {
                                for c in 0..=deg {
                                    out.push(Case::FiberMoves {
                                        p,
                                        q,
                                        e: (a1, a2, b1, b2, c),
                                    });
                                }
                            }
                        }
                    }
                }
            }
        }
        Suite::HighestWeight => {
            for p in 2..=pq.max(2) {
                for xi1 in 0..=deg {
                    for xi2 in 0..=xi1 {
                        out.push(Case::HighestWeight { p, xi1, xi2 });
                    }
                }
            }
        }
        Suite::All => {
            for s in SUITES {
                out.extend(cases(s, max_pq, max_deg));
            }
        }
    }
    out
}

/// Runs one oracle call.
pub fn run_case(case: &Case) -> Result<VerificationReport, CliError> {
    let u = |x: u32| x as usize;
    Ok(match *case {
        Case::Transition { p, q, m, n } => verify_transition_formula(u(p), u(q), m, n)?,
        Case::Chain { p, m } => verify_chain_formula(u(p), m)?,
        Case::UnitaryTransitions { p, q, b } => verify_unitary_transitions(u(p), u(q), b)?,
        Case::FiberMoves { p, q, e } => verify_fiber_moves(u(p), u(q), e)?,
        Case::HighestWeight { p, xi1, xi2 } => verify_highest_weight_vectors(u(p), xi1, xi2)?,
        Case::Pairing { p, q, m, n } => verify_invariant_pairing(u(p), u(q), m, n)?,
    })
}

/// Summary of one suite.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SuiteSummary {
    pub suite: String,
    pub runs: usize,
    pub cases: usize,
    pub passed: bool,
    pub failures: Vec<String>,
}

/// Name of a suite on the command line.
pub fn suite_name(suite: Suite) -> &'static str {
    match suite {
        Suite::Transition => "transition",
        Suite::Chain => "chain",
        Suite::UnitaryTransitions => "unitary-transitions",
        Suite::FiberMoves => "fiber-moves",
        Suite::HighestWeight => "highest-weight",
        Suite::Pairing => "pairing",
        Suite::All => "all",
    }
}

/// Runs the selected suites on `jobs` threads; summaries come back in
/// [`SUITES`] order regardless of scheduling.
pub fn run_suites(
    suite: Suite,
    max_pq: Option<u32>,
    max_deg: Option<u32>,
    jobs: Option<usize>,
) -> Result<Vec<SuiteSummary>, CliError> {
    let selected: Vec<Suite> = if suite == Suite::All {
        SUITES.to_vec()
    } else {
        vec![suite]
    };
    let mut all = Vec::new();
    for &s in &selected {
        for c in cases(s, max_pq, max_deg) {
            all.push((s, c));
        }
    }
    let reports = parallel_map(jobs, &all, |(_, c)| run_case(c))?;
    Ok(selected
        .iter()
        .map(|&s| {
            let mine: Vec<&VerificationReport> = all
                .iter()
                .zip(&reports)
                .filter(|((t, _), _)| *t == s)
                .map(|(_, r)| r)
                .collect();
            SuiteSummary {
                suite: suite_name(s).to_string(),
                runs: mine.len(),
                cases: mine.iter().map(|r| r.cases).sum(),
                passed: mine.iter().all(|r| r.passed),
                failures: mine
                    .iter()
                    .filter(|r| !r.passed)
                    .map(|r| r.to_string())
                    .collect(),
            }
        })
        .collect())
}

/// One line per suite plus any counterexamples.
pub fn to_text(summaries: &[SuiteSummary]) -> String {
    let mut s = String::new();
    for x in summaries {
        let verdict = if x.passed { "pass" } else { "FAIL" };
        s.push_str(&format!(
            "{verdict} {}: {} runs, {} cases\n",
            x.suite, x.runs, x.cases
        ));
        for f in &x.failures {
            s.push_str(&format!("  {f}\n"));
        }
    }
    s
}
