//! The finite positive control at its largest desk size: every pair-cover
//! generated from the 4-scalar pool on a 5-point set has an exact complex.
//! Norms are precomputed per element so the million presentation pairs стay
//! cheap.

use nonarch::finite::{cech_exactness_finite, FiniteFunctionAlgebra, Verdict};
use nonarch::lognorm::rational_int;
use nonarch::{LogNorm, ValuedScalar};

#[test]
fn five_point_pair_covers_are_exact() {
    let size = 5usize;
    let t = ValuedScalar::var_power(rational_int(1));
    let pool = [
        ValuedScalar::zero(),
        ValuedScalar::one(),
        t.clone(),
        &ValuedScalar::one() + &t,
    ];
    let pool_norms: Vec<LogNorm> = pool.iter().map(|v| v.log_norm()).collect();

    // elements as index vectors into the pool
    let mut elements: Vec<Vec<usize>> = vec![vec![]];
    for _ in 0..size {
        elements = elements
            .into_iter()
            .flat_map(|prefix| {
                (0..pool.len()).map(move |i| {
                    let mut next = prefix.clone();
                    next.push(i);
                    next
                })
            })
            .collect();
    }

    // distinct domains over all generating pairs, via precomputed norms
    let mut domains: std::collections::BTreeMap<Vec<usize>, (Vec<usize>, Vec<usize>)> =
        Default::default();
    for f0 in &elements {
        for f1 in &elements {
            let generating = (0..size).all(|x| f0[x] != 0 || f1[x] != 0);
            if !generating {
                continue;
            }
            let domain: Vec<usize> = (0..size)
                .filter(|&x| pool_norms[f1[x]] <= pool_norms[f0[x]])
                .collect();
            domains.entry(domain).or_insert((f0.clone(), f1.clone()));
        }
    }
    assert!(domains.len() > 1, "the pool must cut out several domains");

    let alg = FiniteFunctionAlgebra::new((0..size).map(|i| format!("p{i}")));
    let realize = |idx: &Vec<usize>| -> Vec<ValuedScalar> {
        idx.iter().map(|&i| pool[i].clone()).collect()
    };

    let keys: Vec<&Vec<usize>> = domains.keys().collect();
    let mut checked = 0usize;
    for a in 0..keys.len() {
        for b in a..keys.len() {
            let covered = (0..size).all(|x| keys[a].contains(&x) || keys[b].contains(&x));
            if !covered {
                continue;
            }
            let (fa0, fa1) = &domains[keys[a]];
            let (fb0, fb1) = &domains[keys[b]];
            let mut cover = vec![vec![realize(fa0), realize(fa1)]];
            if b != a {
                cover.push(vec![realize(fb0), realize(fb1)]);
            }
            assert_eq!(
                cech_exactness_finite(&alg, &cover).unwrap(),
                Verdict::Exact,
                "cover {:?} + {:?}",
                keys[a],
                keys[b]
            );
            checked += 1;
        }
    }
    assert!(checked > 100, "expected a substantial cover family, got {checked}");
}
