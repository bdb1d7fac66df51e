#![allow(clippy::needless_range_loop)]

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};

use adlv_core::{AffineElement, AffineWeyl, CosetSide, DynkinType, NodeSet, RootDatum};
use num_rational::Rational64;

fn group(ty: DynkinType, r: usize) -> AffineWeyl {
    AffineWeyl::new(RootDatum::new(ty, r).unwrap())
}

fn eps_simple(ty: DynkinType, r: usize) -> Vec<Vec<i64>> {
    let dim = if ty == DynkinType::A { r + 1 } else { r };
    (0..r)
        .map(|i| {
            let mut v = vec![0; dim];
            if i + 1 < r || ty == DynkinType::A {
                v[i] = 1;
                v[i + 1] = -1;
            } else {
                match ty {
                    DynkinType::B => v[i] = 1,
                    DynkinType::C => v[i] = 2,
                    DynkinType::D => {
                        v[i - 1] = 1;
                        v[i] = 1;
                    }
                    DynkinType::A => unreachable!(),
                }
            }
            v
        })
        .collect()
}

fn eps_roots(ty: DynkinType, r: usize) -> BTreeSet<Vec<i64>> {
    let dim = if ty == DynkinType::A { r + 1 } else { r };
    let mut out = BTreeSet::new();
    for i in 0..dim {
        for j in 0..dim {
            if i == j {
                continue;
            }
            for (a, b) in [(1, -1), (1, 1), (-1, -1)] {
                if ty == DynkinType::A && a == b {
                    continue;
                }
                let mut v = vec![0; dim];
                v[i] = a;
                v[j] = b;
                out.insert(v);
            }
        }
        for s in [1, -1] {
            let mut v = vec![0; dim];
            match ty {
                DynkinType::B => v[i] = s,
                DynkinType::C => v[i] = 2 * s,
                _ => continue,
            }
            out.insert(v);
        }
    }
    out
}

fn to_eps(simple: &[Vec<i64>], coords: &[i64]) -> Vec<i64> {
    let dim = simple[0].len();
    (0..dim)
        .map(|k| coords.iter().zip(simple).map(|(c, s)| c * s[k]).sum())
        .collect()
}

#[test]
fn root_systems_match_epsilon_models() {
    for (ty, r) in [
        (DynkinType::A, 1),
        (DynkinType::A, 4),
        (DynkinType::A, 8),
        (DynkinType::B, 2),
        (DynkinType::B, 6),
        (DynkinType::C, 3),
        (DynkinType::C, 5),
        (DynkinType::D, 4),
        (DynkinType::D, 6),
    ] {
        let rd = RootDatum::new(ty, r).unwrap();
        let simple = eps_simple(ty, r);
        let mut got = BTreeSet::new();
        for a in rd.positive_roots() {
            let e = to_eps(&simple, a);
            got.insert(e.iter().map(|x| -x).collect());
            got.insert(e);
        }
        assert_eq!(got, eps_roots(ty, r), "{ty:?}{r}");
    }
}

#[test]
fn positive_root_counts() {
    assert_eq!(RootDatum::new(DynkinType::A, 1).unwrap().num_positive_roots(), 1);
    assert_eq!(RootDatum::new(DynkinType::A, 8).unwrap().num_positive_roots(), 36);
    assert_eq!(RootDatum::new(DynkinType::B, 6).unwrap().num_positive_roots(), 36);
    let a8 = RootDatum::new(DynkinType::A, 8).unwrap();
    assert_eq!(a8.omega().order(), 9);
    assert!(a8.omega().is_cyclic());
    assert_eq!(RootDatum::new(DynkinType::B, 6).unwrap().omega().order(), 2);
    assert_eq!(RootDatum::new(DynkinType::A, 1).unwrap().omega().order(), 2);
}

fn det(m: &[Vec<i64>]) -> i64 {
    let n = m.len();
    let mut a: Vec<Vec<Rational64>> = m
        .iter()
        .map(|r| r.iter().map(|&x| Rational64::from_integer(x)).collect())
        .collect();
    let mut d = Rational64::from_integer(1);
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| a[i][c] != Rational64::from_integer(0)) else {
            return 0;
        };
        if p != c {
            a.swap(p, c);
            d = -d;
        }
        d *= a[c][c];
        for i in c + 1..n {
            let f = a[i][c] / a[c][c];
            for j in c..n {
                let t = a[c][j] * f;
                a[i][j] -= t;
            }
        }
    }
    d.to_integer()
}

#[test]
fn omega_order_is_cartan_determinant() {
    for (ty, r) in [
        (DynkinType::A, 3),
        (DynkinType::B, 4),
        (DynkinType::C, 4),
        (DynkinType::D, 4),
        (DynkinType::D, 5),
    ] {
        let rd = RootDatum::new(ty, r).unwrap();
        assert_eq!(rd.omega().order() as i64, det(rd.cartan()));
    }
}

#[test]
fn pairings_and_omega_classes() {
    let a2 = RootDatum::new(DynkinType::A, 2).unwrap();
    assert_eq!(a2.pairing(&[1, 0], &[1, 0]).unwrap(), 1);
    assert_eq!(a2.pairing(&[0, 1], &[1, 0]).unwrap(), 0);
    assert_eq!(a2.pairing(&[1, 1], &[1, 0]).unwrap(), 1);
    assert_ne!(a2.omega_component(&[1, 0]).unwrap(), 0);
    assert_eq!(a2.omega_component(&[2, -1]).unwrap(), 0);
    let b6 = RootDatum::new(DynkinType::B, 6).unwrap();
    assert_eq!(b6.omega_component(&[1, 0, 0, 0, 0, 0]).unwrap(), 1);
    assert!(a2.pairing(&[1, 0, 0], &[1, 0]).is_err());
}

fn barycenter_image(x: &AffineElement, b: &[Rational64]) -> Vec<Rational64> {
    let r = b.len();
    let m = x.fin().matrix();
    (0..r)
        .map(|i| {
            (0..r)
                .map(|j| Rational64::from_integer(m[i * r + j]) * b[j])
                .sum::<Rational64>()
                + Rational64::from_integer(x.lam()[i])
        })
        .collect()
}

fn hyperplane_count(g: &AffineWeyl, x: &AffineElement) -> usize {
    let rd = g.root_datum();
    let b = g.base_barycenter();
    let xb = barycenter_image(x, &b);
    rd.positive_roots()
        .iter()
        .map(|a| {
            let u = rd.pairing_rational(a, &b).unwrap();
            let v = rd.pairing_rational(a, &xb).unwrap();
            let (lo, hi) = if u < v { (u, v) } else { (v, u) };
            (lo.floor().to_integer() + 1..=hi.ceil().to_integer() - 1).count()
        })
        .sum()
}

fn cayley_ball(g: &AffineWeyl, radius: usize) -> HashMap<AffineElement, usize> {
    let mut dist = HashMap::from([(g.identity(), 0)]);
    let mut queue = VecDeque::from([g.identity()]);
    while let Some(x) = queue.pop_front() {
        let d = dist[&x];
        if d == radius {
            continue;
        }
        for i in 0..g.num_nodes() {
            let y = g.mul(&x, &g.simple_reflection(i).unwrap());
            if !dist.contains_key(&y) {
                dist.insert(y.clone(), d + 1);
                queue.push_back(y);
            }
        }
    }
    dist
}

#[test]
fn length_matches_hyperplane_count_and_word_metric() {
    for (ty, r, rad) in [
        (DynkinType::A, 1, 6),
        (DynkinType::A, 2, 6),
        (DynkinType::B, 2, 6),
        (DynkinType::C, 3, 4),
        (DynkinType::D, 4, 3),
    ] {
        let g = group(ty, r);
        let ball = cayley_ball(&g, rad);
        for (x, d) in &ball {
            assert_eq!(g.length(x), *d);
            assert_eq!(hyperplane_count(&g, x), *d);
            let (word, k) = g.reduced_word(x);
            assert_eq!(word.len(), *d);
            assert_eq!(k, 0);
            assert_eq!(g.from_word(&word, 0).unwrap(), *x);
        }
        let mut expected: Vec<_> = ball.keys().cloned().collect();
        g.sort_canonical(&mut expected);
        assert_eq!(g.wa_ball(rad), expected);
    }
}

#[test]
fn named_lengths_and_words() {
    let a1 = group(DynkinType::A, 1);
    let t = a1.translation(vec![2]);
    assert_eq!(a1.length(&t), 2);
    assert_eq!(a1.reduced_word(&t), (vec![0, 1], 0));
    assert_eq!(a1.support(&t).to_vec(), vec![0, 1]);
    assert_eq!(a1.mul_word(&[0, 1]).unwrap(), t);
    let s0 = a1.simple_reflection(0).unwrap();
    assert_eq!(s0.lam(), &[2]);
    let a2 = group(DynkinType::A, 2);
    assert_eq!(a2.length(&a2.translation(vec![1, 1])), 4);
    let s0 = a2.simple_reflection(0).unwrap();
    assert_eq!(a2.mul(&s0, &s0), a2.identity());
    let t1 = a2.translation(vec![1, 0]);
    let (w, k) = a2.reduced_word(&t1);
    assert_eq!(w.len(), 2);
    assert_ne!(k, 0);
    let a8 = group(DynkinType::A, 8);
    assert_eq!(a8.support(&a8.mul_word(&[0, 8]).unwrap()).to_vec(), vec![0, 8]);
    assert!(a2.simple_reflection(3).is_err());
}

fn subword_products(g: &AffineWeyl, y: &AffineElement) -> HashSet<AffineElement> {
    let (word, k) = g.reduced_word(y);
    let tau = g.omega_element(k).unwrap();
    let mut out = HashSet::new();
    for mask in 0u32..(1 << word.len()) {
        let sub: Vec<usize> = (0..word.len())
            .filter(|&i| mask >> i & 1 == 1)
            .map(|i| word[i])
            .collect();
        out.insert(g.mul(&g.mul_word(&sub).unwrap(), &tau));
    }
    out
}

#[test]
fn bruhat_order_matches_subword_oracle() {
    for (ty, r, rad) in [(DynkinType::A, 2, 6), (DynkinType::B, 2, 5), (DynkinType::A, 1, 6)] {
        let g = group(ty, r);
        let ball = g.wa_ball(rad);
        for y in &ball {
            let below = subword_products(&g, y);
            for x in &ball {
                assert_eq!(g.bruhat_leq(x, y), below.contains(x));
            }
        }
    }
    let a2 = group(DynkinType::A, 2);
    let x = a2.mul_word(&[2, 1]).unwrap();
    let y = a2.mul_word(&[1, 2, 1]).unwrap();
    assert!(a2.bruhat_leq(&x, &y));
    let tau = a2.omega_element(1).unwrap();
    assert!(!a2.bruhat_leq(&a2.identity(), &tau));
}

fn adm_oracle(g: &AffineWeyl, mu: &[i64]) -> BTreeSet<Vec<usize>> {
    let tops: Vec<_> = g
        .root_datum()
        .coweight_orbit(mu)
        .into_iter()
        .map(|v| g.translation(v))
        .collect();
    let mut out = BTreeSet::new();
    for t in &tops {
        for x in subword_products(g, t) {
            let (w, k) = g.reduced_word(&x);
            let mut key = w;
            key.push(100 + k);
            out.insert(key);
        }
    }
    out
}

#[test]
fn admissible_sets_match_oracle() {
    let a1 = group(DynkinType::A, 1);
    let adm: BTreeSet<Vec<usize>> = a1
        .admissible_set(&[2])
        .unwrap()
        .iter()
        .map(|x| a1.reduced_word(x).0)
        .collect();
    let expected: BTreeSet<Vec<usize>> =
        [vec![], vec![0], vec![1], vec![1, 0], vec![0, 1]].into_iter().collect();
    assert_eq!(adm, expected);
    assert_eq!(a1.admissible_set(&[0]).unwrap(), vec![a1.identity()]);
    for (ty, r, mu) in [
        (DynkinType::A, 2, vec![1, 0]),
        (DynkinType::A, 2, vec![1, 1]),
        (DynkinType::A, 3, vec![0, 1, 0]),
        (DynkinType::B, 2, vec![1, 0]),
        (DynkinType::C, 2, vec![0, 1]),
    ] {
        let g = group(ty, r);
        let got: BTreeSet<Vec<usize>> = g
            .admissible_set(&mu)
            .unwrap()
            .iter()
            .map(|x| {
                let (mut w, k) = g.reduced_word(x);
                w.push(100 + k);
                w
            })
            .collect();
        assert_eq!(got, adm_oracle(&g, &mu), "{ty:?}{r} {mu:?}");
    }
}

#[test]
fn admissible_set_is_downward_closed() {
    let g = group(DynkinType::A, 2);
    let adm = g.admissible_set(&[1, 1]).unwrap();
    let set: HashSet<_> = adm.iter().cloned().collect();
    let k = g.omega_part(&adm[0]);
    let tau = g.omega_element(k).unwrap();
    for y in &adm {
        for x in g.wa_ball(g.length(y)) {
            let x = g.mul(&x, &tau);
            if g.bruhat_leq(&x, y) {
                assert!(set.contains(&x));
            }
        }
    }
}

#[test]
fn coset_representatives_are_minimal() {
    let g = group(DynkinType::A, 2);
    let k1 = NodeSet::single(1);
    let k2 = NodeSet::single(2);
    let w121 = g.mul_word(&[1, 2, 1]).unwrap();
    assert_eq!(
        g.reduced_word(&g.min_double(&w121, k1, k2)).0,
        vec![2, 1]
    );
    assert_eq!(
        g.min_coset_rep(&g.identity(), k1, CosetSide::Double, k1).unwrap(),
        g.identity()
    );
    assert!(g.min_coset_rep(&g.identity(), NodeSet::single(7), CosetSide::Left, k1).is_err());
    for (ty, r) in [(DynkinType::A, 2), (DynkinType::B, 2)] {
        let g = group(ty, r);
        let subsets: Vec<NodeSet> = (0u64..(1 << g.num_nodes()))
            .map(NodeSet)
            .filter(|&p| g.is_finite_parabolic(p))
            .collect();
        for x in g.wa_ball(4) {
            for &k in &subsets {
                let wk = g.parabolic_elements(k).unwrap();
                for &k2 in &subsets {
                    let wk2 = g.parabolic_elements(k2).unwrap();
                    let mut best: Option<AffineElement> = None;
                    for u in &wk {
                        for v in &wk2 {
                            let y = g.mul(&g.mul(u, &x), v);
                            if best.as_ref().is_none_or(|b| g.length(&y) < g.length(b)) {
                                best = Some(y);
                            }
                        }
                    }
                    let m = g.min_double(&x, k, k2);
                    assert_eq!(g.length(&m), g.length(best.as_ref().unwrap()));
                    for u in &wk {
                        for v in &wk2 {
                            assert!(g.bruhat_leq(&m, &g.mul(&g.mul(u, &x), v)));
                        }
                    }
                }
                let ml = g.min_left(&x, k);
                assert!(wk.iter().all(|u| g.length(&g.mul(u, &x)) >= g.length(&ml)));
                let mr = g.min_right(&x, k);
                assert!(wk.iter().all(|u| g.length(&g.mul(&x, u)) >= g.length(&mr)));
            }
        }
    }
}

#[test]
fn omega_elements_have_length_zero_and_permute_nodes() {
    for (ty, r) in [
        (DynkinType::A, 5),
        (DynkinType::B, 3),
        (DynkinType::C, 3),
        (DynkinType::D, 4),
        (DynkinType::D, 5),
    ] {
        let g = group(ty, r);
        for k in 0..g.omega_order() {
            let t = g.omega_element(k).unwrap();
            assert_eq!(g.length(&t), 0);
            let ti = g.inverse(&t);
            let act = g.omega_node_action(k);
            for i in 0..g.num_nodes() {
                let c = g.mul(&g.mul(&t, &g.simple_reflection(i).unwrap()), &ti);
                assert_eq!(c, g.simple_reflection(act[i]).unwrap());
            }
        }
    }
}

#[test]
fn subexpression_lemma_in_small_rank() {
    let g = group(DynkinType::A, 2);
    assert!(g.subexpression_check(&[1], &g.mul_word(&[1]).unwrap()).unwrap());
    assert!(g.subexpression_check(&[1, 2], &g.mul_word(&[1, 2, 1]).unwrap()).unwrap());
    assert!(!g.subexpression_check(&[1, 2], &g.mul_word(&[2, 1]).unwrap()).unwrap());
    assert!(g.subexpression_check(&[1, 1], &g.identity()).is_err());
    let g = group(DynkinType::B, 2);
    assert!(g.check_chain(&[0, 1]).is_err());
}
