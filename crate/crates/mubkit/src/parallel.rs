//! Multi-threaded MUB verification. Basis pairs are handed out from a
//! shared counter; results are merged by pair index, so the report does
//! not depend on the number of threads.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use mubkit_core::mub::{
    basis_pairs, check_basis_pair, shape_failures, ExactChecker, FloatChecker, FloatMubSet, MubError,
    MubReport, PairCheck, PairFailure, VerifyMode,
};
use mubkit_core::MubSet;

type PairResult = Result<Vec<PairFailure>, MubError>;

/// Verifies with up to `jobs` threads; `jobs = 0` means one per CPU.
pub fn verify_parallel<C: PairCheck + ?Sized>(checker: &C, jobs: usize) -> Result<MubReport, MubError> {
    let work = basis_pairs(checker.num_bases());
    let jobs = match jobs {
        0 => std::thread::available_parallelism().map_or(1, |n| n.get()),
        n => n,
    }
    .clamp(1, work.len().max(1));
    let next = AtomicUsize::new(0);
    let results: Mutex<Vec<(usize, PairResult)>> = Mutex::new(Vec::new());
    std::thread::scope(|scope| {
        for _ in 0..jobs {
            scope.spawn(|| loop {
                let k = next.fetch_add(1, Ordering::Relaxed);
                let Some(&(b, c)) = work.get(k) else { break };
                let r = check_basis_pair(checker, b, c);
                results.lock().unwrap().push((k, r));
            });
        }
    });
    let mut results = results.into_inner().unwrap();
    results.sort_by_key(|(k, _)| *k);
    let mut pairs = Vec::new();
    for (_, r) in results {
        pairs.extend(r?);
    }
    pairs.sort();
    Ok(MubReport {
        shape: shape_failures(checker),
        pairs,
    })
}

pub fn verify_mubs_jobs(set: &MubSet, mode: VerifyMode, jobs: usize) -> Result<MubReport, MubError> {
    match mode {
        VerifyMode::Exact => verify_parallel(&ExactChecker::new(set), jobs),
        VerifyMode::Float => verify_float_jobs(&set.to_float(), jobs),
    }
}

pub fn verify_float_jobs(set: &FloatMubSet, jobs: usize) -> Result<MubReport, MubError> {
    verify_parallel(&FloatChecker::new(set), jobs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use mubkit_core::hadamard::dft;
    use mubkit_core::latin::complete_mols_prime_power;
    use mubkit_core::mub::{build_mubs, verify_mubs};
    use mubkit_core::net::net_from_mols;

    #[test]
    fn report_independent_of_jobs() {
        let net = net_from_mols(&complete_mols_prime_power(4).unwrap());
        let mut set = build_mubs(&net, &dft(4)).unwrap();
        set.vector_mut(2, 5).set_exponent(1, 3);
        set.vector_mut(4, 0).set_exponent(0, 2);
        for mode in [VerifyMode::Exact, VerifyMode::Float] {
            let serial = verify_mubs(&set, mode).unwrap();
            assert!(!serial.passed());
            for jobs in [0, 1, 2, 3, 8, 64] {
                assert_eq!(
                    verify_mubs_jobs(&set, mode, jobs).unwrap(),
                    serial,
                    "jobs = {jobs}"
                );
            }
        }
    }
}
