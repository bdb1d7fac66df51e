use std::collections::{BTreeSet, HashMap, HashSet};

use adlv_core::finite_flag_lab::{
    coxeter_element, coxeter_flag_from_line, dl_points, dl_points_in, frobenius_flag,
    longest_permutation, lusztig_containment_check, moore_criterion, relative_position, FiniteField,
    Flag,
};

fn vectors(field: &FiniteField, n: usize) -> Vec<Vec<u32>> {
    let q = field.q() as usize;
    (0..q.pow(n as u32))
        .map(|mut c| {
            (0..n)
                .map(|_| {
                    let d = (c % q) as u32;
                    c /= q;
                    d
                })
                .collect()
        })
        .collect()
}

fn ordered_bases(field: &FiniteField, n: usize) -> Vec<Vec<Vec<u32>>> {
    independent_tuples(field, n, n)
}

fn independent_tuples(field: &FiniteField, n: usize, len: usize) -> Vec<Vec<Vec<u32>>> {
    let vs = vectors(field, n);
    let mut out: Vec<Vec<Vec<u32>>> = vec![vec![]];
    for k in 0..len {
        out = out
            .into_iter()
            .flat_map(|b| {
                vs.iter()
                    .filter(|v| {
                        let mut rows = b.clone();
                        rows.push((*v).clone());
                        field.rank(&rows) == k + 1
                    })
                    .map(|v| {
                        let mut nb = b.clone();
                        nb.push(v.clone());
                        nb
                    })
                    .collect::<Vec<_>>()
            })
            .collect();
    }
    out
}

fn all_flags(field: &FiniteField, n: usize) -> BTreeSet<Flag> {
    independent_tuples(field, n, n - 1)
        .iter()
        .map(|b| Flag::from_vectors(field, b).unwrap())
        .collect()
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..n {
            let mut q = p.clone();
            q.insert(pos, n);
            out.push(q);
        }
    }
    out.sort();
    out
}

fn poly_mul(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let mut out = vec![0; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    out
}

fn monic(p: u32, d: usize) -> Vec<Vec<u32>> {
    (0..p.pow(d as u32))
        .map(|mut c| {
            let mut f: Vec<u32> = (0..d)
                .map(|_| {
                    let x = c % p;
                    c /= p;
                    x
                })
                .collect();
            f.push(1);
            f
        })
        .collect()
}

#[test]
fn modulus_is_least_irreducible() {
    for (p, m) in [(2, 2), (2, 3), (2, 4), (3, 2), (3, 3), (5, 2), (7, 2)] {
        let f = FiniteField::new(p, m).unwrap();
        let m = m as usize;
        let reducible: HashSet<Vec<u32>> = (1..m)
            .flat_map(|d| {
                let a = monic(p, d);
                let b = monic(p, m - d);
                a.iter()
                    .flat_map(|x| b.iter().map(move |y| poly_mul(x, y, p)))
                    .collect::<Vec<_>>()
            })
            .collect();
        assert!(!reducible.contains(f.modulus()));
        let pos = monic(p, m).iter().position(|g| g == f.modulus()).unwrap();
        assert!(monic(p, m)[..pos].iter().all(|g| reducible.contains(g)));
    }
    assert_eq!(FiniteField::new(2, 3).unwrap().modulus(), &[1, 1, 0, 1]);
}

#[test]
fn field_axioms_and_frobenius() {
    for (p, m) in [(2, 2), (2, 3), (3, 2), (5, 1)] {
        let f = FiniteField::new(p, m).unwrap();
        let els: Vec<u32> = f.elements().collect();
        assert_eq!(els.len() as u32, f.q());
        for &a in &els {
            assert_eq!(f.add(a, f.neg(a)), 0);
            if a != 0 {
                assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
            }
            let mut x = a;
            for _ in 0..m {
                x = f.frobenius(x);
            }
            assert_eq!(x, a);
            assert_eq!(f.is_in_prime_field(a), f.frobenius(a) == a);
            for &b in &els {
                assert_eq!(f.frobenius(f.mul(a, b)), f.mul(f.frobenius(a), f.frobenius(b)));
                assert_eq!(f.frobenius(f.add(a, b)), f.add(f.frobenius(a), f.frobenius(b)));
                for &c in els.iter().step_by(3) {
                    assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                }
            }
        }
        let nontrivial = els.iter().filter(|&&a| f.frobenius(a) != a).count();
        assert_eq!(nontrivial as u32, f.q() - p);
    }
    assert!(FiniteField::new(2, 0).is_err());
    assert!(FiniteField::new(2, 20).is_err());
}

#[test]
fn relative_position_matches_basis_scan() {
    let f = FiniteField::new(2, 1).unwrap();
    let n = 3;
    let mut oracle: HashMap<(Flag, Flag), BTreeSet<Vec<usize>>> = HashMap::new();
    for b in ordered_bases(&f, n) {
        let fl = Flag::from_vectors(&f, &b[..n - 1]).unwrap();
        for w in permutations(n) {
            let wb: Vec<Vec<u32>> = w.iter().map(|&k| b[k - 1].clone()).collect();
            let fl2 = Flag::from_vectors(&f, &wb[..n - 1]).unwrap();
            oracle.entry((fl.clone(), fl2)).or_default().insert(w);
        }
    }
    let flags = all_flags(&f, n);
    assert_eq!(flags.len(), 21);
    assert_eq!(oracle.len(), flags.len() * flags.len());
    for ((a, b), ws) in &oracle {
        assert_eq!(ws.len(), 1);
        assert_eq!(relative_position(&f, a, b).unwrap(), *ws.iter().next().unwrap());
    }
    let s = Flag::standard(&f, 4);
    assert_eq!(relative_position(&f, &s, &Flag::reversed(&f, 4)).unwrap(), longest_permutation(4));
}

#[test]
fn relative_position_is_gl_invariant() {
    for (p, m) in [(2, 1), (2, 2), (3, 1)] {
        let f = FiniteField::new(p, m).unwrap();
        let flags: Vec<Flag> = all_flags(&f, 3).into_iter().collect();
        let gs = ordered_bases(&f, 3);
        for (k, g) in gs.iter().enumerate().step_by(7) {
            let a = &flags[k % flags.len()];
            let b = &flags[(k * 5 + 3) % flags.len()];
            let ga = a.transform(&f, g).unwrap();
            let gb = b.transform(&f, g).unwrap();
            assert_eq!(
                relative_position(&f, &ga, &gb).unwrap(),
                relative_position(&f, a, b).unwrap()
            );
        }
    }
    let f = FiniteField::new(2, 1).unwrap();
    let a = Flag::standard(&f, 2);
    assert!(relative_position(&f, &a, &Flag::standard(&f, 3)).is_err());
}

#[test]
fn frobenius_on_flags() {
    let f = FiniteField::new(2, 2).unwrap();
    let std = Flag::standard(&f, 3);
    assert_eq!(frobenius_flag(&f, &std), std);
    let t = 2;
    assert!(!f.is_in_prime_field(t));
    let line = Flag::from_vectors(&f, &[vec![1, t]]).unwrap();
    let moved = frobenius_flag(&f, &line);
    assert_ne!(moved, line);
    assert_eq!(moved, Flag::from_vectors(&f, &[vec![1, f.frobenius(t)]]).unwrap());
    for fl in all_flags(&f, 3) {
        assert_eq!(frobenius_flag(&f, &frobenius_flag(&f, &fl)), fl);
    }
}

#[test]
fn dl_points_partition_flag_variety() {
    for (p, m, n) in [(2, 2, 3), (3, 1, 3), (2, 3, 2), (2, 1, 4)] {
        let f = FiniteField::new(p, m).unwrap();
        let flags = all_flags(&f, n);
        let mut seen = BTreeSet::new();
        for w in permutations(n) {
            for fl in dl_points_in(&f, &w, n).unwrap() {
                assert!(seen.insert(fl.clone()));
                assert_eq!(relative_position(&f, &fl, &frobenius_flag(&f, &fl)).unwrap(), w);
            }
        }
        assert_eq!(seen, flags);
        let rational = flags.iter().filter(|x| frobenius_flag(&f, x) == **x).count();
        let id: Vec<usize> = (1..=n).collect();
        assert_eq!(dl_points_in(&f, &id, n).unwrap().len(), rational);
    }
}

#[test]
fn dl_points_examples() {
    assert_eq!(dl_points(&[2, 1], 2, 2, 2).unwrap().len(), 2);
    let f = FiniteField::new(2, 3).unwrap();
    let pts: BTreeSet<Flag> = dl_points(&coxeter_element(3), 3, 2, 3).unwrap().into_iter().collect();
    let oracle: BTreeSet<Flag> = all_flags(&f, 3)
        .into_iter()
        .filter(|fl| {
            let l = fl.space(1);
            let sl = frobenius_flag(&f, fl);
            let sum: Vec<Vec<u32>> = l.iter().chain(sl.space(1)).cloned().collect();
            let s2l = frobenius_flag(&f, &sl);
            let all: Vec<Vec<u32>> = sum.iter().chain(s2l.space(1)).cloned().collect();
            f.rank(&sum) == 2 && f.rref(&sum) == fl.space(2) && f.rank(&all) == 3
        })
        .collect();
    assert_eq!(pts, oracle);
    assert!(dl_points(&[1, 1, 3], 3, 2, 1).is_err());
    assert!(dl_points(&coxeter_element(6), 6, 2, 4).is_err());
}

#[test]
fn lusztig_containment_small() {
    for (n, p, m) in [(2, 2, 2), (2, 3, 2), (3, 2, 3)] {
        let rep = lusztig_containment_check(n, p, m).unwrap();
        assert!(rep.passed());
        assert!(rep.points > 0);
        let f = FiniteField::new(p, m).unwrap();
        let std = Flag::standard(&f, n);
        for fl in dl_points_in(&f, &coxeter_element(n), n).unwrap() {
            for i in 1..n {
                for j in 1..n {
                    let e: Vec<Vec<u32>> = (0..j)
                        .map(|k| (0..n).map(|c| (c == k) as u32).collect())
                        .collect();
                    let both: Vec<Vec<u32>> = fl.space(i).iter().chain(&e).cloned().collect();
                    let dim = i + j - f.rank(&both);
                    assert_eq!(dim, (i + j).saturating_sub(n));
                }
            }
            assert_eq!(relative_position(&f, &std, &fl).unwrap(), longest_permutation(n));
        }
    }
    assert_eq!(lusztig_containment_check(2, 2, 2).unwrap().points, 2);
}

#[test]
fn moore_criterion_matches_flag_construction() {
    let f = FiniteField::new(2, 3).unwrap();
    let cox: HashSet<Flag> = dl_points_in(&f, &coxeter_element(3), 3).unwrap().into_iter().collect();
    let mut lines = 0;
    for a in vectors(&f, 3) {
        if a.iter().all(|&x| x == 0) {
            assert!(moore_criterion(&f, &a).is_err());
            continue;
        }
        lines += 1;
        let direct = coxeter_flag_from_line(&f, &a).unwrap();
        let moore = moore_criterion(&f, &a).unwrap();
        assert_eq!(moore, direct.is_some());
        if let Some(fl) = direct {
            assert!(cox.contains(&fl));
        }
        let line = f.rref(std::slice::from_ref(&a));
        let member = cox.iter().any(|fl| fl.space(1) == line.as_slice());
        assert_eq!(moore, member);
    }
    assert_eq!(lines, 511);
    let f4 = FiniteField::new(2, 2).unwrap();
    assert!(!moore_criterion(&f4, &[3, 3]).unwrap());
    assert!(moore_criterion(&f4, &[1, 2]).unwrap());
}

#[test]
fn moore_report_counts() {
    let rep = adlv_core::finite_flag_lab::moore_cross_check(3, 2, 3).unwrap();
    assert!(rep.passed());
    assert_eq!(rep.vectors, 511);
    assert_eq!(rep.independent, 168);
    let rep = adlv_core::finite_flag_lab::moore_cross_check(2, 3, 2).unwrap();
    assert!(rep.passed());
    assert_eq!(rep.independent, 48);
}
