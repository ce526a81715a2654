//! Acceptance criteria 1-12. All comparisons are exact equalities over F_p
//! (tolerance 0); randomized checks use seed 0 and at least 200 samples.

use std::process::ExitCode;

use hamrep::cartan::build_hhat;
use hamrep::cli::checks::{run_criterion, CRITERIA};
use rayon::prelude::*;

const SEED: u64 = 0;

fn primes_for(k: usize) -> &'static [u32] {
    match k {
        1 | 4 | 7 | 12 => &[5, 7],
        6 => &[5, 7, 11],
        _ => &[5],
    }
}

fn main() -> ExitCode {
    let jobs: Vec<(usize, u32)> = (1..=CRITERIA.len()).flat_map(|k| primes_for(k).iter().map(move |&p| (k, p))).collect();
    let results: Vec<Result<String, String>> = jobs
        .par_iter()
        .map(|&(k, p)| {
            let alg = build_hhat(p).map_err(|e| e.to_string())?;
            run_criterion(k, &alg, SEED)
        })
        .collect();
    let mut failed = 0;
    for k in 1..=CRITERIA.len() {
        let mine: Vec<(u32, &Result<String, String>)> =
            jobs.iter().zip(&results).filter(|((j, _), _)| *j == k).map(|((_, p), r)| (*p, r)).collect();
        let pass = mine.iter().all(|(_, r)| r.is_ok());
        let detail: Vec<String> = mine
            .iter()
            .map(|(p, r)| match r {
                Ok(d) => format!("p={p}: {d}"),
                Err(d) => format!("p={p}: FAILED {d}"),
            })
            .collect();
        println!(
            "criterion {k} ({}): {} [exact, tol 0] {}",
            CRITERIA[k - 1],
            if pass { "PASS" } else { "FAIL" },
            detail.join("; ")
        );
        failed += usize::from(!pass);
    }
    if failed == 0 {
        println!("acceptance: all {} criteria pass", CRITERIA.len());
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {failed} criteria fail");
        ExitCode::FAILURE
    }
}
