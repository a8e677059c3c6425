//! Shared corpus for the integration suites.
#![allow(dead_code)]

use winrat::proof::proof_to_string;
use winrat::testkit::{
    emit_proof_dpll, emit_proof_dpll_with, emit_split_proof, exhaustive_sat, gen_pigeonhole, gen_random_ksat,
    DpllOptions, DpllOutcome, SplitEncoding,
};
use winrat::{load_proof_str, Config, Formula, Literal, Session, Stats, Verdict};

#[derive(Clone, Debug)]
pub struct Instance {
    pub name: String,
    pub formula: Formula,
    pub proof: String,
}

pub struct Outcome {
    pub verdict: Verdict,
    pub stats: Stats,
    pub flags: Vec<(bool, bool)>,
}

pub fn check(formula: &Formula, proof: &str, config: &Config) -> Outcome {
    let db = load_proof_str(proof, config.mem_budget).expect("proof parses");
    let mut s = Session::new(formula.clone(), db, config.clone()).expect("session");
    let verdict = s.run().expect("run");
    Outcome { verdict, stats: s.stats().clone(), flags: s.flags() }
}

/// Unsatisfiable random 3-CNF formulas (per the exhaustive oracle).
pub fn random_unsat(count: usize, seed0: u64) -> Vec<Formula> {
    let mut out = Vec::new();
    let mut seed = seed0;
    while out.len() < count {
        let vars = 8 + (seed % 7) as u32;
        let clauses = (vars as f64 * 5.5) as usize;
        let f = gen_random_ksat(vars, clauses, 3, seed);
        seed += 1;
        if !exhaustive_sat(&f).unwrap().is_sat() {
            out.push(f);
        }
    }
    out
}

pub fn dpll(f: &Formula, deletions: bool, random_branching: bool, seed: u64) -> String {
    match emit_proof_dpll_with(f, DpllOptions { deletions, random_branching, seed }).unwrap() {
        DpllOutcome::Unsat(p) => proof_to_string(&p),
        DpllOutcome::Sat(_) => panic!("corpus formula is satisfiable"),
    }
}

/// Unsatisfiable random 3-CNF formulas with `vars` variables at the given
/// clause ratio.
pub fn random_unsat_at(count: usize, vars: u32, ratio: f64, seed0: u64) -> Vec<Formula> {
    let mut out = Vec::new();
    let mut seed = seed0;
    while out.len() < count {
        let f = gen_random_ksat(vars, (vars as f64 * ratio) as usize, 3, seed);
        seed += 1;
        if !exhaustive_sat(&f).unwrap().is_sat() {
            out.push(f);
        }
    }
    out
}

/// Emitted proofs (with and without deletions) and split proofs over
/// pigeonhole and random formulas.
pub fn corpus() -> Vec<Instance> {
    let mut out = Vec::new();
    for holes in 2..=4 {
        let f = gen_pigeonhole(holes);
        for (del, random) in [(false, false), (true, false), (true, true)] {
            out.push(Instance {
                name: format!(
                    "php{}-{}{}{}",
                    holes + 1,
                    holes,
                    if del { "-del" } else { "" },
                    if random { "-rnd" } else { "" }
                ),
                proof: dpll(&f, del, random, holes as u64),
                formula: f.clone(),
            });
        }
    }
    for (k, f) in random_unsat(12, 1000).into_iter().chain(random_unsat_at(4, 18, 4.4, 77)).enumerate() {
        out.push(Instance { name: format!("rand{k}"), proof: dpll(&f, k % 2 == 1, k % 3 != 0, k as u64), formula: f.clone() });
        if k < 6 {
            let branch: Vec<Literal> = (1..=(1 + k as u32 % 3)).map(|v| Literal::new(v, k % 2 == 0)).collect();
            let enc = if k % 2 == 0 { SplitEncoding::Equivalence } else { SplitEncoding::Expanded };
            let p = emit_split_proof(&f, &branch, enc).unwrap();
            out.push(Instance { name: format!("rand{k}-split"), proof: proof_to_string(&p), formula: f });
        }
    }
    let php = gen_pigeonhole(3);
    for n in 1..=3u32 {
        let branch: Vec<Literal> = (0..n).map(|i| Literal::new(1 + i * 4, false)).collect();
        let p = emit_split_proof(&php, &branch, SplitEncoding::Equivalence).unwrap();
        out.push(Instance { name: format!("php4-3-split{n}"), proof: proof_to_string(&p), formula: php.clone() });
    }
    // Larger refutations, beyond the enumerating oracles.
    let php = gen_pigeonhole(5);
    out.push(Instance { name: "php6-5-del".into(), proof: dpll(&php, true, false, 5), formula: php.clone() });
    let branch = [Literal::new(1, false), Literal::new(8, true)];
    let p = emit_split_proof(&php, &branch, SplitEncoding::Equivalence).unwrap();
    out.push(Instance { name: "php6-5-split2".into(), proof: proof_to_string(&p), formula: php });
    let mut seed = 90;
    for vars in [40u32, 50, 60] {
        let f = loop {
            seed += 1;
            let f = gen_random_ksat(vars, (vars as f64 * 4.3) as usize, 3, seed);
            if matches!(emit_proof_dpll(&f), Ok(DpllOutcome::Unsat(_))) {
                break f;
            }
        };
        out.push(Instance { name: format!("rand{vars}v-del"), proof: dpll(&f, true, true, seed), formula: f });
    }
    out
}
