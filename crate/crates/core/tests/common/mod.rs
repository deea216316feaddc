//! Shared test oracles.

use num::{BigInt, BigRational, One, Zero};

/// Monic orthogonal polynomials by classical Gram-Schmidt in exact rational
/// arithmetic; returns coefficient vectors (ascending) and squared norms.
pub fn rational_gram_schmidt(
    points: &[i64],
    weight: &BigRational,
    degree: usize,
) -> Vec<(Vec<BigRational>, BigRational)> {
    let pts: Vec<BigRational> = points.iter().map(|&p| BigRational::from_integer(BigInt::from(p))).collect();
    let eval = |c: &[BigRational], x: &BigRational| c.iter().rev().fold(BigRational::zero(), |acc, a| acc * x + a);
    let inner = |p: &[BigRational], q: &[BigRational]| {
        pts.iter().fold(BigRational::zero(), |acc, x| acc + eval(p, x) * eval(q, x) * weight)
    };
    let mut out: Vec<(Vec<BigRational>, BigRational)> = Vec::new();
    for k in 0..=degree {
        let mut mono = vec![BigRational::zero(); k + 1];
        mono[k] = BigRational::one();
        let mut p = mono.clone();
        for (q, nq) in &out {
            let proj = inner(&mono, q) / nq;
            for (i, c) in q.iter().enumerate() {
                p[i] = &p[i] - &proj * c;
            }
        }
        let n = inner(&p, &p);
        out.push((p, n));
    }
    out
}
