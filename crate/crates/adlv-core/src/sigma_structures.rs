//! Frobenius-type automorphisms of the affine diagram and the combinatorics
//! of Ekedahl-Oort and Bruhat-Tits strata built on them.
//!
//! Rational (`sigma_J`-fixed) objects are modelled by fixed points of the
//! twisted action on the affine Weyl group.

use std::collections::{HashSet, VecDeque};

use num_rational::Rational64;
use rayon::prelude::*;

use crate::affine_weyl::{AffineElement, AffineWeyl, FiniteWeyl};
use crate::building_geometry::Residue;
use crate::error::{Error, Result};
use crate::nodeset::NodeSet;
use crate::root_datum::{DynkinType, RootDatum};

/// An automorphism of the extended affine Weyl group that permutes the
/// simple affine reflections.
///
/// It is stored as `x -> rho F(x) rho^{-1}` where `rho` has length zero and
/// `F` comes from a finite diagram automorphism.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiagramAutomorphism {
    perm: Vec<usize>,
    rho_class: usize,
    rho: AffineElement,
    rho_inv: AffineElement,
    finite: Vec<usize>,
}

fn affine_cartan(g: &AffineWeyl) -> Vec<Vec<i64>> {
    let gram = g.root_datum().gram();
    let n = g.num_nodes();
    let form = |a: &[i64], b: &[i64]| -> i64 {
        let mut s = 0;
        for i in 0..a.len() {
            for j in 0..b.len() {
                s += a[i] * gram[i][j] * b[j];
            }
        }
        s
    };
    (0..n)
        .map(|i| {
            let bi = &g.node(i).beta;
            (0..n)
                .map(|j| 2 * form(bi, &g.node(j).beta) / form(bi, bi))
                .collect()
        })
        .collect()
}

fn permute_matrix(m: &[i64], f: &[usize]) -> Vec<i64> {
    let r = f.len();
    let mut out = vec![0; r * r];
    for i in 0..r {
        for j in 0..r {
            out[f[i] * r + f[j]] = m[i * r + j];
        }
    }
    out
}

impl DiagramAutomorphism {
    /// Builds the automorphism with `s_i -> s_{perm[i]}`.
    pub fn new(g: &AffineWeyl, perm: Vec<usize>) -> Result<DiagramAutomorphism> {
        let n = g.num_nodes();
        if !g.root_datum().is_irreducible() {
            return Err(Error::Unsupported(
                "diagram automorphisms need a connected affine diagram".into(),
            ));
        }
        if perm.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: perm.len(),
            });
        }
        let mut seen = vec![false; n];
        for &p in &perm {
            g.check_node(p)?;
            if std::mem::replace(&mut seen[p], true) {
                return Err(Error::InvalidArgument(format!(
                    "{perm:?} is not a permutation"
                )));
            }
        }
        let a = affine_cartan(g);
        for i in 0..n {
            for j in 0..n {
                if a[perm[i]][perm[j]] != a[i][j] {
                    return Err(Error::InvalidArgument(format!(
                        "{perm:?} does not preserve the affine Cartan matrix"
                    )));
                }
            }
        }
        let rho_class = (0..g.omega_order())
            .find(|&k| g.omega_node_action(k)[0] == perm[0])
            .ok_or_else(|| {
                Error::InvalidArgument(format!("node {} is not special", perm[0]))
            })?;
        let act = g.omega_node_action(rho_class);
        let mut act_inv = vec![0; n];
        for (i, &j) in act.iter().enumerate() {
            act_inv[j] = i;
        }
        let r = g.rank();
        let finite: Vec<usize> = (1..=r).map(|i| act_inv[perm[i]] - 1).collect();
        let rho = g.omega_element(rho_class)?;
        let out = DiagramAutomorphism {
            perm,
            rho_inv: g.inverse(&rho),
            rho,
            rho_class,
            finite,
        };
        for i in 0..n {
            if out.apply(g, g.s(i)) != *g.s(out.perm[i]) {
                return Err(Error::InvalidArgument(format!(
                    "{:?} is not induced by an automorphism",
                    out.perm
                )));
            }
        }
        Ok(out)
    }

    pub fn identity(g: &AffineWeyl) -> Result<DiagramAutomorphism> {
        DiagramAutomorphism::new(g, (0..g.num_nodes()).collect())
    }

    /// Conjugation by the length-zero element of Omega class `k`.
    pub fn conjugation(g: &AffineWeyl, k: usize) -> Result<DiagramAutomorphism> {
        g.omega_element(k)?;
        DiagramAutomorphism::new(g, g.omega_node_action(k).to_vec())
    }

    pub fn perm(&self) -> &[usize] {
        &self.perm
    }

    /// Omega class of the length-zero factor `rho`.
    pub fn rho_class(&self) -> usize {
        self.rho_class
    }

    /// The finite part of the automorphism as a permutation of coordinates.
    pub fn finite_perm(&self) -> &[usize] {
        &self.finite
    }

    fn apply_finite_part(&self, x: &AffineElement) -> AffineElement {
        let r = self.finite.len();
        let mut lam = vec![0; r];
        for i in 0..r {
            lam[self.finite[i]] = x.lam()[i];
        }
        let fin = FiniteWeyl::from_matrices(
            permute_matrix(x.fin().matrix(), &self.finite),
            permute_matrix(x.fin().inverse_matrix(), &self.finite),
        );
        AffineElement::from_parts(lam, fin)
    }

    pub fn apply(&self, g: &AffineWeyl, x: &AffineElement) -> AffineElement {
        let y = self.apply_finite_part(x);
        g.mul(&g.mul(&self.rho, &y), &self.rho_inv)
    }

    pub fn fixes(&self, g: &AffineWeyl, x: &AffineElement) -> bool {
        self.apply(g, x) == *x
    }

    /// `self` after `other`.
    pub fn compose(&self, g: &AffineWeyl, other: &DiagramAutomorphism) -> Result<DiagramAutomorphism> {
        DiagramAutomorphism::new(g, other.perm.iter().map(|&i| self.perm[i]).collect())
    }

    pub fn inverse(&self, g: &AffineWeyl) -> Result<DiagramAutomorphism> {
        let mut inv = vec![0; self.perm.len()];
        for (i, &j) in self.perm.iter().enumerate() {
            inv[j] = i;
        }
        DiagramAutomorphism::new(g, inv)
    }

    /// Order of the node permutation.
    pub fn order(&self) -> usize {
        let mut k = 1;
        let mut p = self.perm.clone();
        while p.iter().enumerate().any(|(i, &j)| i != j) {
            p = p.iter().map(|&i| self.perm[i]).collect();
            k += 1;
        }
        k
    }

    /// Orbits of the node permutation, each sorted, ordered by smallest member.
    pub fn orbits(&self) -> Vec<NodeSet> {
        let n = self.perm.len();
        let mut done = NodeSet::EMPTY;
        let mut out = Vec::new();
        for i in 0..n {
            if done.contains(i) {
                continue;
            }
            let mut o = NodeSet::EMPTY;
            let mut j = i;
            while !o.contains(j) {
                o.insert(j);
                j = self.perm[j];
            }
            done = done.union(o);
            out.push(o);
        }
        out
    }

    pub fn orbit_of(&self, i: usize) -> NodeSet {
        self.orbits().into_iter().find(|o| o.contains(i)).unwrap_or(NodeSet::EMPTY)
    }

    /// Smallest stable subset containing `p`.
    pub fn closure(&self, p: NodeSet) -> NodeSet {
        self.orbits()
            .into_iter()
            .filter(|o| !o.intersection(p).is_empty())
            .fold(NodeSet::EMPTY, NodeSet::union)
    }

    /// The action on the apartment as `v -> M v + t` in coweight coordinates.
    pub fn affine_action(&self) -> (Vec<i64>, Vec<i64>) {
        let r = self.finite.len();
        let mut p = vec![0; r * r];
        for i in 0..r {
            p[self.finite[i] * r + i] = 1;
        }
        let w = self.rho.fin().matrix();
        let mut m = vec![0; r * r];
        for i in 0..r {
            for k in 0..r {
                for j in 0..r {
                    m[i * r + j] += w[i * r + k] * p[k * r + j];
                }
            }
        }
        (m, self.rho.lam().to_vec())
    }

    pub fn act_point(&self, v: &[Rational64]) -> Vec<Rational64> {
        let (m, t) = self.affine_action();
        let r = t.len();
        (0..r)
            .map(|i| {
                (0..r)
                    .map(|j| Rational64::from_integer(m[i * r + j]) * v[j])
                    .sum::<Rational64>()
                    + Rational64::from_integer(t[i])
            })
            .collect()
    }

    /// Coxeter generators `w_{0,O}` of the fixed subgroup, one per orbit `O`
    /// with `W_O` finite.
    pub fn rational_generators(&self, g: &AffineWeyl) -> Vec<AffineElement> {
        self.orbits()
            .into_iter()
            .filter(|&o| g.is_finite_parabolic(o))
            .map(|o| g.longest_element(o).unwrap())
            .collect()
    }

    /// Fixed elements of `W_a` of length at most `radius`, canonically sorted.
    pub fn fixed_elements(&self, g: &AffineWeyl, radius: usize) -> Vec<AffineElement> {
        let gens: Vec<(AffineElement, usize)> = self
            .rational_generators(g)
            .into_iter()
            .map(|x| {
                let l = g.length(&x);
                (x, l)
            })
            .collect();
        let id = g.identity();
        let mut seen: HashSet<AffineElement> = HashSet::from([id.clone()]);
        let mut queue = VecDeque::from([(id, 0usize)]);
        while let Some((x, lx)) = queue.pop_front() {
            for (s, ls) in &gens {
                if lx + ls > radius {
                    continue;
                }
                let y = g.mul(&x, s);
                if g.length(&y) == lx + ls && seen.insert(y.clone()) {
                    queue.push_back((y, lx + ls));
                }
            }
        }
        let mut out: Vec<_> = seen.into_iter().collect();
        g.sort_canonical(&mut out);
        out
    }

    /// Same set as [`Self::fixed_elements`], by filtering the whole ball.
    pub fn fixed_elements_bruteforce(&self, g: &AffineWeyl, radius: usize) -> Vec<AffineElement> {
        g.wa_ball(radius)
            .into_iter()
            .filter(|x| self.fixes(g, x))
            .collect()
    }

    /// Rank of the fixed apartment: number of orbits minus one.
    pub fn rational_rank(&self) -> usize {
        self.orbits().len() - 1
    }
}

/// The data `(G, sigma, mu, K)` of a basic locus, with `K = S \ {v}`.
#[derive(Clone, Debug)]
pub struct CoxeterDatum {
    g: AffineWeyl,
    sigma: DiagramAutomorphism,
    mu: Vec<i64>,
    removed_node: usize,
    tau: AffineElement,
    tau_class: usize,
    tau_sigma: DiagramAutomorphism,
}

/// An element of the Ekedahl-Oort index set for data of Coxeter type.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EOElement {
    pub w: AffineElement,
    pub word: Vec<usize>,
    pub omega: usize,
    pub sigma_supp: NodeSet,
    pub sigma_w: NodeSet,
}

/// A Bruhat-Tits stratum `i Y(w)`, with `i` minimal in its coset modulo the
/// rational parabolic of type `S \ Sigma_w`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BTStratumLabel {
    pub eo: usize,
    pub coset_rep: AffineElement,
}

#[derive(Clone, Debug)]
pub struct ConstancyReport {
    pub value: AffineElement,
    pub gate: AffineElement,
    pub w0p: AffineElement,
    pub length_additive: bool,
    pub reproduced: bool,
}

/// Support argument showing `s_v` in the support of `w_{0,P} w_2 w_1 w_{0,P'}`.
#[derive(Clone, Debug)]
pub struct SeparatorCertificate {
    pub swapped: bool,
    pub translated_case: bool,
    pub w1: AffineElement,
    pub w2: AffineElement,
    pub w3: AffineElement,
    pub chain: Vec<usize>,
    pub chain_ok: bool,
    pub support_ok: bool,
    pub all_u_ok: bool,
    pub route_matches: bool,
    pub inequality_holds: bool,
    pub margin: i64,
    pub far: bool,
}

#[derive(Clone, Debug)]
pub struct Separator {
    pub j: AffineElement,
    pub val1: AffineElement,
    pub val2: AffineElement,
    pub scanned: usize,
    pub certificate: SeparatorCertificate,
}

#[derive(Clone, Debug)]
pub struct BtFailure {
    pub a: usize,
    pub b: usize,
    pub reason: String,
}

#[derive(Clone, Debug)]
pub struct BtReport {
    pub labels: Vec<BTStratumLabel>,
    pub pairs: usize,
    pub separated: usize,
    pub certificates_ok: usize,
    pub max_separator_length: usize,
    pub failures: Vec<BtFailure>,
}

impl BtReport {
    pub fn success(&self) -> bool {
        self.failures.is_empty() && self.separated == self.pairs
    }
}

#[derive(Clone, Debug)]
pub struct StraightReport {
    pub straight: bool,
    pub direct: bool,
    pub newton: bool,
    pub period: usize,
    pub newton_denominator: usize,
}

impl CoxeterDatum {
    pub fn new(
        rd: RootDatum,
        sigma: Vec<usize>,
        mu: Vec<i64>,
        removed_node: usize,
    ) -> Result<CoxeterDatum> {
        if !rd.is_irreducible() {
            return Err(Error::Unsupported(
                "the affine Dynkin diagram must be connected".into(),
            ));
        }
        rd.check_dim(mu.len())?;
        let g = AffineWeyl::new(rd);
        g.check_node(removed_node)?;
        let sigma = DiagramAutomorphism::new(&g, sigma)?;
        if sigma.perm[removed_node] != removed_node {
            return Err(Error::InvalidArgument(format!(
                "K = S \\ {{{removed_node}}} is not sigma-stable"
            )));
        }
        let tau_class = g.omega_part(&g.translation(mu.clone()));
        let tau = g.omega_element(tau_class)?;
        let tau_sigma = DiagramAutomorphism::conjugation(&g, tau_class)?.compose(&g, &sigma)?;
        Ok(CoxeterDatum {
            g,
            sigma,
            mu,
            removed_node,
            tau,
            tau_class,
            tau_sigma,
        })
    }

    /// Type `A_{n-1}` with the nontrivial diagram automorphism fixing node 0,
    /// `mu = omega_1`, `K = S \ {0}`.
    pub fn twisted_a(n: usize) -> Result<CoxeterDatum> {
        if n < 3 {
            return Err(Error::InvalidArgument(format!("need n >= 3, got {n}")));
        }
        let rd = RootDatum::new(DynkinType::A, n - 1)?;
        let sigma = (0..n).map(|i| if i == 0 { 0 } else { n - i }).collect();
        let mut mu = vec![0; n - 1];
        mu[0] = 1;
        CoxeterDatum::new(rd, sigma, mu, 0)
    }

    /// Type `B_m` with `sigma` exchanging nodes 0 and 1, `mu = omega_1`,
    /// `K = S \ {m}`.
    pub fn split_b(m: usize) -> Result<CoxeterDatum> {
        if m < 2 {
            return Err(Error::InvalidArgument(format!("need m >= 2, got {m}")));
        }
        let rd = RootDatum::new(DynkinType::B, m)?;
        let mut sigma: Vec<usize> = (0..=m).collect();
        sigma.swap(0, 1);
        let mut mu = vec![0; m];
        mu[0] = 1;
        CoxeterDatum::new(rd, sigma, mu, m)
    }

    pub fn weyl(&self) -> &AffineWeyl {
        &self.g
    }

    pub fn sigma(&self) -> &DiagramAutomorphism {
        &self.sigma
    }

    pub fn mu(&self) -> &[i64] {
        &self.mu
    }

    pub fn removed_node(&self) -> usize {
        self.removed_node
    }

    pub fn k(&self) -> NodeSet {
        self.g.all_nodes().without(self.removed_node)
    }

    pub fn tau_class(&self) -> usize {
        self.tau_class
    }

    /// The twisted Frobenius `Int(tau) o sigma`.
    pub fn tau_sigma(&self) -> &DiagramAutomorphism {
        &self.tau_sigma
    }

    /// The length-zero element `tau` with `epsilon^mu` in `W_a tau`.
    pub fn basic_tau(&self) -> AffineElement {
        self.tau.clone()
    }

    pub fn sigma_support(&self, w: &AffineElement) -> NodeSet {
        self.tau_sigma.closure(self.g.support(w))
    }

    pub fn is_sigma_coxeter(&self, w: &AffineElement) -> bool {
        let (word, _) = self.g.reduced_word(w);
        let supp = self.sigma_support(w);
        self.tau_sigma
            .orbits()
            .into_iter()
            .filter(|o| o.is_subset(supp))
            .all(|o| word.iter().filter(|&&i| o.contains(i)).count() == 1)
    }

    pub fn sigma_w_of(&self, w: &AffineElement) -> NodeSet {
        let supp = self.sigma_support(w);
        if supp.is_empty() {
            self.tau_sigma.orbit_of(self.removed_node)
        } else {
            self.g.neighbours(supp)
        }
    }

    pub fn sigma_w(&self, e: &EOElement) -> NodeSet {
        self.sigma_w_of(&e.w)
    }

    fn eo_element(&self, w: AffineElement) -> EOElement {
        let (word, omega) = self.g.reduced_word(&w);
        EOElement {
            sigma_supp: self.sigma_support(&w),
            sigma_w: self.sigma_w_of(&w),
            w,
            word,
            omega,
        }
    }

    pub fn enumerate_eo(&self) -> Result<Vec<EOElement>> {
        let k = self.k();
        let all = self.g.all_nodes();
        Ok(self
            .g
            .admissible_set(&self.mu)?
            .into_iter()
            .filter(|w| {
                self.g.min_left(w, k) == *w
                    && self.sigma_support(w) != all
                    && self.is_sigma_coxeter(w)
            })
            .map(|w| self.eo_element(w))
            .collect())
    }

    /// Builds an EO element from a word and check membership in the EO set.
    pub fn eo_from_word(&self, word: &[usize]) -> Result<EOElement> {
        let w = self.g.from_word(word, self.tau_class)?;
        let e = self.eo_element(w);
        if !self.enumerate_eo()?.contains(&e) {
            return Err(Error::InvalidArgument(format!(
                "word {word:?} does not give an EO element"
            )));
        }
        Ok(e)
    }

    pub fn rational_elements(&self, radius: usize) -> Vec<AffineElement> {
        self.tau_sigma.fixed_elements(&self.g, radius)
    }

    pub fn is_rational(&self, x: &AffineElement) -> bool {
        self.tau_sigma.fixes(&self.g, x)
    }

    fn check_rational(&self, j: &AffineElement) -> Result<()> {
        self.g.check_element(j)?;
        if !self.g.in_wa(j) || !self.is_rational(j) {
            let (word, k) = self.g.reduced_word(j);
            return Err(Error::NotRational(format!("word {word:?}, omega {k}")));
        }
        Ok(())
    }

    pub fn is_sigma_straight(&self, w: &AffineElement) -> bool {
        self.sigma_straight_report(w).straight
    }

    pub fn sigma_straight_report(&self, w: &AffineElement) -> StraightReport {
        let g = &self.g;
        let n = self.sigma.order();
        let lw = g.length(w);
        let mut direct = true;
        let mut prod = g.identity();
        let mut term = w.clone();
        let mut z = g.identity();
        for k in 1..=2 * n {
            prod = g.mul(&prod, &term);
            term = self.sigma.apply(g, &term);
            if g.length(&prod) != k * lw {
                direct = false;
            }
            if k == n {
                z = prod.clone();
            }
        }
        let mut m = 1;
        let mut zm = z.clone();
        while !zm.is_translation() {
            zm = g.mul(&zm, &z);
            m += 1;
        }
        let rd = g.root_datum();
        let total: i64 = rd
            .positive_roots()
            .iter()
            .map(|a| rd.pairing(a, zm.lam()).unwrap().abs())
            .sum();
        let newton = (lw * n * m) as i64 == total;
        StraightReport {
            straight: newton && direct,
            direct,
            newton,
            period: n,
            newton_denominator: m,
        }
    }

    fn w0(&self, p: NodeSet) -> AffineElement {
        self.g.longest_element(p).unwrap()
    }

    /// Value of the constant relative position from `j` to `Y(e)`.
    pub fn verify_constancy(&self, e: &EOElement, j: &AffineElement) -> Result<ConstancyReport> {
        self.check_rational(j)?;
        let g = &self.g;
        let p = e.sigma_supp;
        let r = g.residue(&g.identity(), p)?;
        let gate = g.gate(j, &r);
        let w0p = self.w0(p);
        let d = g.weyl_distance(j, &gate);
        let value = g.mul(&d, &w0p);
        let h = g.mul(&gate, &w0p);
        Ok(ConstancyReport {
            reproduced: g.weyl_distance(j, &h) == value,
            length_additive: g.length(&value) == g.length(&d) + g.length(&w0p),
            value,
            gate,
            w0p,
        })
    }

    /// `W_K`-double coset of the relative position from `j` to `i Y(e)`.
    pub fn stratum_value(&self, e: &EOElement, i: &AffineElement, j: &AffineElement) -> AffineElement {
        let g = &self.g;
        let p = e.sigma_supp;
        let r = g.residue(i, p).unwrap();
        let gate = g.gate(j, &r);
        let v = g.mul(&g.weyl_distance(j, &gate), &self.w0(p));
        g.min_double(&v, self.k(), self.k())
    }

    /// Whether `i Y(e) = i2 Y(e2)`.
    pub fn same_stratum(
        &self,
        e: &EOElement,
        i: &AffineElement,
        e2: &EOElement,
        i2: &AffineElement,
    ) -> bool {
        if e != e2 {
            return false;
        }
        let rest = self.g.all_nodes().difference(e.sigma_w);
        let d = self.g.weyl_distance(i, i2);
        self.g.min_right(&d, rest) == self.g.identity()
    }

    fn chain_path(&self, from: usize, allowed: NodeSet) -> Option<Vec<usize>> {
        let g = &self.g;
        let v = self.removed_node;
        let n = g.num_nodes();
        let mut prev = vec![usize::MAX; n];
        let mut queue = VecDeque::from([from]);
        prev[from] = from;
        while let Some(x) = queue.pop_front() {
            if x == v {
                let mut path = vec![v];
                let mut c = v;
                while c != from {
                    c = prev[c];
                    path.push(c);
                }
                path.reverse();
                return Some(path);
            }
            for y in 0..n {
                if allowed.contains(y) && prev[y] == usize::MAX && g.dynkin_adjacent(x, y) {
                    prev[y] = x;
                    queue.push_back(y);
                }
            }
        }
        None
    }

    /// Chooses `(t_0, ..., t_r)` with `t_r = s_v`, `t_0` outside `P`.
    fn select_chain(
        &self,
        p: NodeSet,
        p2: NodeSet,
        sigma2: NodeSet,
        w1: &AffineElement,
        translated: bool,
    ) -> Option<Vec<usize>> {
        if !translated || *w1 == self.g.identity() {
            for x in p2.difference(p).iter() {
                if let Some(path) = self.chain_path(x, p2) {
                    let pos = path.iter().rposition(|&t| !p.contains(t)).unwrap();
                    return Some(path[pos..].to_vec());
                }
            }
            return None;
        }
        let supp1 = self.g.support(w1);
        let candidates = if sigma2.intersection(p).is_empty() {
            sigma2.intersection(supp1)
        } else {
            self.g.all_nodes().difference(p).intersection(supp1)
        };
        candidates
            .iter()
            .find_map(|t0| self.chain_path(t0, p2.with(t0)))
    }

    /// Finds a rational `j` whose relative positions to `Y(e1)` and
    /// `j' Y(e2)` differ.
    pub fn find_separator(
        &self,
        e1: &EOElement,
        e2: &EOElement,
        jprime: &AffineElement,
        search_radius: usize,
    ) -> Result<Separator> {
        self.check_rational(jprime)?;
        let g = &self.g;
        let id = g.identity();
        if self.same_stratum(e1, &id, e2, jprime) {
            return Err(Error::IdenticalStrata);
        }
        let swapped = e2.sigma_supp.is_subset(e1.sigma_supp) && e2.sigma_supp != e1.sigma_supp;
        let (a, b, jn) = if swapped {
            (e2, e1, g.inverse(jprime))
        } else {
            (e1, e2, jprime.clone())
        };
        let translated = !self.same_stratum(b, &jn, b, &id);
        let jn = if translated { jn } else { id.clone() };
        let (p, p2) = (a.sigma_supp, b.sigma_supp);
        let k = self.k();
        let r = g.residue(&id, p)?;
        let r2 = g.residue(&jn, p2)?;
        let w0p = self.w0(p);
        let w0p2 = self.w0(p2);
        let w1 = g.min_double(&jn, p, p2);

        let chain = self.select_chain(p, p2, b.sigma_w, &w1, translated);
        let w1w0 = g.mul(&w1, &w0p2);
        let chain_ok = match &chain {
            Some(t) => {
                g.check_chain(t).is_ok()
                    && !p.contains(t[0])
                    && t[1..].iter().all(|&x| p2.contains(x))
                    && *t.last().unwrap() == self.removed_node
                    && (!translated || w1 == id || g.support(&w1).contains(t[0]))
                    && g.length(&w1w0) == g.length(&w1) + g.length(&w0p2)
                    && g.bruhat_leq(&g.mul_word(t).unwrap(), &w1w0)
            }
            None => false,
        };
        let v = self.removed_node;
        let all_u_ok = g
            .parabolic_elements(p)?
            .iter()
            .all(|u| g.support(&g.mul(u, &w1w0)).contains(v));

        let mut first_hit: Option<(AffineElement, AffineElement, AffineElement, usize)> = None;
        let mut chosen = None;
        let mut scanned = 0;
        for j in self.rational_elements(search_radius) {
            scanned += 1;
            let gt = g.gate(&j, &r);
            let gt2 = g.gate(&j, &r2);
            let v1 = g.min_double(&g.mul(&g.weyl_distance(&j, &gt), &w0p), k, k);
            let v2 = g.min_double(&g.mul(&g.weyl_distance(&j, &gt2), &w0p2), k, k);
            if v1 == v2 {
                continue;
            }
            let bb = g.gate(&gt2, &r);
            let bb2 = g.gate(&bb, &r2);
            let w3 = g.weyl_distance(&j, &gt);
            let w2 = g.weyl_distance(&gt, &bb);
            let route = bb2 == gt2
                && g.weyl_distance(&bb, &bb2) == w1
                && g.length(&g.weyl_distance(&j, &gt2))
                    == g.length(&w3) + g.length(&w2) + g.length(&w1);
            if route {
                chosen = Some((j, v1, v2, w2, w3, scanned));
                break;
            }
            if first_hit.is_none() {
                first_hit = Some((j, v1, v2, scanned));
            }
        }
        let (j, v1, v2, w2, w3, scanned, route_matches) = match (chosen, first_hit) {
            (Some((j, v1, v2, w2, w3, s)), _) => (j, v1, v2, w2, w3, s, true),
            (None, Some((j, v1, v2, s))) => {
                let gt = g.gate(&j, &r);
                let bb = g.gate(&g.gate(&j, &r2), &r);
                let w2 = g.weyl_distance(&gt, &bb);
                let w3 = g.weyl_distance(&j, &gt);
                (j, v1, v2, w2, w3, s, false)
            }
            (None, None) => {
                return Err(Error::SearchExhausted(format!(
                    "no rational j of length <= {search_radius} separates the strata \
                     ({scanned} candidates)"
                )))
            }
        };
        let lhs = g.mul(&w3, &w0p);
        let rhs = g.mul(&g.mul(&g.mul(&w3, &w2), &w1), &w0p2);
        let inequality_holds = g.min_double(&lhs, k, k) != g.min_double(&rhs, k, k);
        let u = g.mul(&w0p, &w2);
        let support_ok = g.support(&g.mul(&u, &w1w0)).contains(v);
        let u2 = g.mul(&g.mul(&w2, &w1), &w0p2);
        let (margin, far) = if g.min_right(&w0p, k) != g.min_right(&u2, k) {
            let m = g.sufficient_margin(&w0p, &u2, k)?;
            (m, g.far_from_walls(&j, k, m)?)
        } else {
            (0, false)
        };
        let (j, val1, val2) = if swapped {
            (g.mul(jprime, &j), v2, v1)
        } else {
            (j, v1, v2)
        };
        Ok(Separator {
            j,
            val1,
            val2,
            scanned,
            certificate: SeparatorCertificate {
                swapped,
                translated_case: translated,
                w1,
                w2,
                w3,
                chain: chain.unwrap_or_default(),
                chain_ok,
                support_ok,
                all_u_ok,
                route_matches,
                inequality_holds,
                margin,
                far,
            },
        })
    }

    /// All stratum labels with coset representative of length at most `radius`.
    pub fn bt_labels(&self, eo: &[EOElement], radius: usize) -> Vec<BTStratumLabel> {
        let g = &self.g;
        let rational = self.rational_elements(radius);
        let mut out = Vec::new();
        for (idx, e) in eo.iter().enumerate() {
            let rest = g.all_nodes().difference(e.sigma_w);
            let mut reps: Vec<AffineElement> = Vec::new();
            let mut seen = HashSet::new();
            for x in &rational {
                let m = g.min_right(x, rest);
                if seen.insert(m.clone()) {
                    reps.push(m);
                }
            }
            g.sort_canonical(&mut reps);
            out.extend(reps.into_iter().map(|coset_rep| BTStratumLabel { eo: idx, coset_rep }));
        }
        out
    }

    /// Separates every pair of stratum labels up to `radius`.
    pub fn bt_vs_j_check(&self, radius: usize, search_radius: usize) -> Result<BtReport> {
        let eo = self.enumerate_eo()?;
        let labels = self.bt_labels(&eo, radius);
        let g = &self.g;
        let pairs: Vec<(usize, usize)> = (0..labels.len())
            .flat_map(|a| (a + 1..labels.len()).map(move |b| (a, b)))
            .collect();
        let results: Vec<std::result::Result<(usize, bool), BtFailure>> = pairs
            .par_iter()
            .map(|&(a, b)| {
                let (la, lb) = (&labels[a], &labels[b]);
                let (ea, eb) = (&eo[la.eo], &eo[lb.eo]);
                let jp = g.mul(&g.inverse(&la.coset_rep), &lb.coset_rep);
                let fail = |reason: String| BtFailure { a, b, reason };
                let s = self
                    .find_separator(ea, eb, &jp, search_radius)
                    .map_err(|e| fail(e.to_string()))?;
                let j = g.mul(&la.coset_rep, &s.j);
                let x = self.stratum_value(ea, &la.coset_rep, &j);
                let y = self.stratum_value(eb, &lb.coset_rep, &j);
                if x == y {
                    return Err(fail("separator not confirmed by direct comparison".into()));
                }
                let c = &s.certificate;
                Ok((g.length(&s.j), c.chain_ok && c.support_ok && c.all_u_ok))
            })
            .collect();
        let mut report = BtReport {
            pairs: pairs.len(),
            separated: 0,
            certificates_ok: 0,
            max_separator_length: 0,
            failures: Vec::new(),
            labels,
        };
        for r in results {
            match r {
                Ok((len, cert)) => {
                    report.separated += 1;
                    report.certificates_ok += cert as usize;
                    report.max_separator_length = report.max_separator_length.max(len);
                }
                Err(f) => report.failures.push(f),
            }
        }
        Ok(report)
    }

    /// Residue of type `supp_sigma(e)` through `i`.
    pub fn stratum_residue(&self, e: &EOElement, i: &AffineElement) -> Result<Residue> {
        self.g.residue(i, e.sigma_supp)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twisted_a_tau_shifts_nodes() {
        let cd = CoxeterDatum::twisted_a(9).unwrap();
        let act = cd.weyl().omega_node_action(cd.tau_class());
        assert_eq!(act, &[1, 2, 3, 4, 5, 6, 7, 8, 0]);
        let orbits: Vec<Vec<usize>> = cd.tau_sigma().orbits().iter().map(|o| o.to_vec()).collect();
        assert_eq!(
            orbits,
            vec![vec![0, 1], vec![2, 8], vec![3, 7], vec![4, 6], vec![5]]
        );
    }

    #[test]
    fn automorphism_group_laws() {
        let cd = CoxeterDatum::split_b(3).unwrap();
        let g = cd.weyl();
        let s = cd.sigma();
        let inv = s.inverse(g).unwrap();
        let id = s.compose(g, &inv).unwrap();
        for x in g.wa_ball(3) {
            assert_eq!(id.apply(g, &x), x);
        }
        assert_eq!(cd.tau_sigma().perm(), &[0, 1, 2, 3]);
    }

    #[test]
    fn rational_generators_match_filter() {
        for cd in [CoxeterDatum::twisted_a(4).unwrap(), CoxeterDatum::split_b(2).unwrap()] {
            let g = cd.weyl();
            let a = cd.tau_sigma().fixed_elements(g, 5);
            let b = cd.tau_sigma().fixed_elements_bruteforce(g, 5);
            assert_eq!(a, b);
        }
    }
}
