use std::collections::BTreeSet;

use tribracket_core::module::{validate_module, Coefficient};
use tribracket_core::ring::units;
use tribracket_core::tribracket::validate_tribracket;
use tribracket_core::{
    constant_module, enumerate_tribrackets, search_modules, Cube, Group, ModuleSearch, Tribracket, XModule,
};

/// Every Latin cube of order `n`, by brute force over all `n^(n^3)` tensors.
fn latin_cubes(n: usize) -> Vec<Vec<usize>> {
    let cells = n * n * n;
    let mut out = Vec::new();
    let mut t = vec![0usize; cells];
    let is_latin = |t: &[usize]| {
        let g = |a: usize, b: usize, c: usize| t[(a * n + b) * n + c];
        (0..n).all(|p| {
            (0..n).all(|q| {
                let distinct = |f: &dyn Fn(usize) -> usize| (0..n).map(f).collect::<BTreeSet<_>>().len() == n;
                distinct(&|r| g(p, q, r)) && distinct(&|r| g(p, r, q)) && distinct(&|r| g(r, p, q))
            })
        })
    };
    loop {
        if is_latin(&t) {
            out.push(t.clone());
        }
        let mut k = cells;
        loop {
            if k == 0 {
                return out;
            }
            k -= 1;
            t[k] += 1;
            if t[k] < n {
                break;
            }
            t[k] = 0;
        }
    }
}

fn naive_axiom2(t: &[usize], n: usize) -> bool {
    let g = |a: usize, b: usize, c: usize| t[(a * n + b) * n + c];
    (0..n * n * n * n).all(|i| {
        let (a, b, c, d) = (i / (n * n * n), (i / (n * n)) % n, (i / n) % n, i % n);
        let (abc, abd, acd) = (g(a, b, c), g(a, b, d), g(a, c, d));
        let first = g(b, abc, abd);
        first == g(c, abc, acd) && first == g(d, abd, acd)
    })
}

#[test]
fn enumeration_matches_naive_filter_n2() {
    let naive: Vec<Vec<usize>> = latin_cubes(2).into_iter().filter(|t| naive_axiom2(t, 2)).collect();
    let fast: Vec<Vec<usize>> = enumerate_tribrackets(2).iter().map(|t| t.table().as_flat().to_vec()).collect();
    assert_eq!(fast, naive);
}

#[test]
fn enumeration_matches_naive_filter_n3() {
    // Brute force over all Latin cubes of order 3: each matrix is a Latin
    // square, and there are 12 of those, so 12^3 candidates.
    let squares: Vec<Vec<usize>> = {
        let mut v = Vec::new();
        for p in [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]] {
            for q in [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]] {
                let s: Vec<usize> = (0..3).flat_map(|b| (0..3).map(move |c| p[(q[b] + c) % 3])).collect();
                v.push(s);
            }
        }
        v.sort();
        v.dedup();
        v.retain(|s| (0..3).all(|c| (0..3).map(|b| s[b * 3 + c]).collect::<BTreeSet<_>>().len() == 3));
        v
    };
    assert_eq!(squares.len(), 12);
    let mut naive = Vec::new();
    for s0 in &squares {
        for s1 in &squares {
            for s2 in &squares {
                let t: Vec<usize> = [s0, s1, s2].iter().flat_map(|s| s.iter().copied()).collect();
                let pillars = (0..9).all(|i| [t[i], t[9 + i], t[18 + i]].iter().collect::<BTreeSet<_>>().len() == 3);
                if pillars && naive_axiom2(&t, 3) {
                    naive.push(t);
                }
            }
        }
    }
    naive.sort();
    let fast: Vec<Vec<usize>> = enumerate_tribrackets(3).iter().map(|t| t.table().as_flat().to_vec()).collect();
    assert_eq!(fast, naive);
    let three = Tribracket::from_one_based(
        3,
        &[1, 3, 2, 2, 1, 3, 3, 2, 1, 2, 1, 3, 3, 2, 1, 1, 3, 2, 3, 2, 1, 1, 3, 2, 2, 1, 3],
    )
    .unwrap();
    assert!(fast.contains(&three.table().as_flat().to_vec()));
}

#[test]
fn every_enumerated_tribracket_validates() {
    for n in 1..=3 {
        for t in enumerate_tribrackets(n) {
            validate_tribracket(t.table()).unwrap();
        }
    }
}

#[test]
fn alexander_tribrackets_validate() {
    for n in 2..=8u64 {
        for &x in &units(n) {
            for &y in &units(n) {
                let t = Tribracket::alexander(n, x, y).unwrap();
                validate_tribracket(t.table()).unwrap();
                assert!(naive_axiom2(t.table().as_flat(), n as usize));
            }
        }
        assert!(Tribracket::alexander(n, n, 1).is_err());
    }
}

fn small_groups() -> Vec<Group> {
    let mut g: Vec<Group> = (1..=6).map(Group::cyclic).collect();
    g.push(Group::product(&Group::cyclic(2), &Group::cyclic(2)));
    g.push(Group::symmetric(3));
    g
}

#[test]
fn dehn_tribrackets_validate() {
    for g in small_groups() {
        let t = Tribracket::dehn(&g);
        validate_tribracket(t.table()).unwrap();
        assert!(naive_axiom2(t.table().as_flat(), g.order()));
    }
}

#[test]
fn dehn_of_cyclic_group_is_alexander_one_one() {
    for n in 2..=8 {
        assert_eq!(Tribracket::dehn(&Group::cyclic(n)), Tribracket::alexander(n as u64, 1, 1).unwrap());
    }
}

fn x2() -> Tribracket {
    Tribracket::from_one_based(2, &[1, 2, 2, 1, 2, 1, 1, 2]).unwrap()
}

/// The four identity families written out directly on nested tensors.
fn naive_module_ok(t: &Tribracket, x: &[u64], y: &[u64], m: u64) -> bool {
    let n = t.size();
    let i = |a: usize, b: usize, c: usize| (a * n + b) * n + c;
    let xv = |a, b, c| x[i(a, b, c)] as i64;
    let yv = |a, b, c| y[i(a, b, c)] as i64;
    let eq = |vals: [i64; 3]| {
        let r = vals.map(|v| v.rem_euclid(m as i64));
        r[0] == r[1] && r[1] == r[2]
    };
    if x.iter().chain(y).any(|&v| units(m).binary_search(&v).is_err()) {
        return false;
    }
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                for d in 0..n {
                    let (abc, abd, acd) = (t.op(a, b, c), t.op(a, b, d), t.op(a, c, d));
                    let f1 = [
                        xv(c, abc, acd) * xv(a, b, c),
                        xv(d, abd, acd) * xv(a, b, d),
                        xv(b, abc, abd) * xv(a, b, c) + yv(b, abc, abd) * xv(a, b, d)
                            - xv(b, abc, abd) * yv(b, abc, abd),
                    ];
                    let f2 = [
                        yv(c, abc, acd) * yv(a, c, d),
                        yv(b, abc, abd) * yv(a, b, d),
                        xv(d, abd, acd) * yv(a, b, d) + yv(d, abd, acd) * yv(a, c, d)
                            - xv(d, abd, acd) * yv(d, abd, acd),
                    ];
                    let f3 = [
                        xv(b, abc, abd) * yv(a, b, c),
                        yv(d, abd, acd) * xv(a, c, d),
                        xv(c, abc, acd) * yv(a, b, c) + yv(c, abc, acd) * xv(a, c, d)
                            - xv(c, abc, acd) * yv(c, abc, acd),
                    ];
                    let f4 = [
                        xv(c, abc, acd) * xv(a, b, c) * yv(a, b, c) + yv(c, abc, acd) * xv(a, c, d) * yv(a, c, d),
                        xv(b, abc, abd) * xv(a, b, c) * yv(a, b, c) + yv(b, abc, abd) * xv(a, b, d) * yv(a, b, d),
                        xv(d, abd, acd) * xv(a, b, d) * yv(a, b, d) + yv(d, abd, acd) * xv(a, c, d) * yv(a, c, d),
                    ];
                    if !(eq(f1) && eq(f2) && eq(f3) && eq(f4)) {
                        return false;
                    }
                }
            }
        }
    }
    true
}

#[test]
fn module_search_matches_naive_filter() {
    let t = x2();
    let u = units(3);
    let mut naive = Vec::new();
    // Each of the 16 entries ranges over the units {1, 2}.
    for bits in 0u32..1 << 16 {
        let vals: Vec<u64> = (0..16).map(|k| u[((bits >> (15 - k)) & 1) as usize]).collect();
        if naive_module_ok(&t, &vals[..8], &vals[8..], 3) {
            naive.push(vals);
        }
    }
    let found: Vec<Vec<u64>> = search_modules(&t, 3, None).unwrap().iter().map(XModule::flattened).collect();
    assert_eq!(found, naive);
    for f in &found {
        let x = Cube::from_flat(2, f[..8].to_vec()).unwrap();
        let y = Cube::from_flat(2, f[8..].to_vec()).unwrap();
        validate_module(&t, &x, &y, 3).unwrap();
    }
}

#[test]
fn validator_agrees_with_naive_check_on_random_tensors() {
    let t = x2();
    let mut state = 0x9e3779b97f4a7c15u64;
    for m in [3u64, 4, 5, 8] {
        for _ in 0..300 {
            let vals: Vec<u64> = (0..16)
                .map(|_| {
                    state ^= state << 13;
                    state ^= state >> 7;
                    state ^= state << 17;
                    state % m
                })
                .collect();
            let x = Cube::from_flat(2, vals[..8].to_vec()).unwrap();
            let y = Cube::from_flat(2, vals[8..].to_vec()).unwrap();
            assert_eq!(validate_module(&t, &x, &y, m).is_ok(), naive_module_ok(&t, &vals[..8], &vals[8..], m));
        }
    }
}

#[test]
fn search_over_z8_contains_the_z8_example() {
    let v3 = XModule::from_flat(x2(), 8, &[1, 3, 1, 7, 7, 1, 3, 1], &[1, 5, 1, 1, 1, 1, 5, 1]).unwrap();
    let all = search_modules(&x2(), 8, None).unwrap();
    assert!(all.contains(&v3));
}

#[test]
fn pinned_constants_succeed_iff_units() {
    let t = x2();
    for m in [3u64, 4, 6, 8] {
        for x in 0..m {
            for y in 0..m {
                let found = ModuleSearch::new(&t, m).unwrap().pin_constant(x, y).collect_sorted();
                let units_ok = units(m).contains(&x) && units(m).contains(&y);
                assert_eq!(!found.is_empty(), units_ok, "x={x} y={y} N={m}");
                if units_ok {
                    assert_eq!(found, [constant_module(&t, x, y, m).unwrap()]);
                }
            }
        }
    }
    let one = ModuleSearch::new(&t, 3).unwrap().pin(Coefficient::X, 0, 0, 0, 2).collect_sorted();
    assert!(one.iter().all(|m| m.x(0, 0, 0) == 2));
}
