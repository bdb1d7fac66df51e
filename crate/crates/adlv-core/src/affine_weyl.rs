//! The extended affine Weyl group `Lambda x| W_0` of a root datum.
//!
//! Elements are stored as a translation part and a finite part acting on
//! coweight coordinates; words are derived on demand.

use std::collections::{HashMap, HashSet, VecDeque};

use num_rational::Rational64;

use crate::error::{Error, Result};
use crate::nodeset::NodeSet;
use crate::root_datum::RootDatum;

/// A finite Weyl group element as an integer matrix on coweight coordinates,
/// kept together with its inverse.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FiniteWeyl {
    m: Vec<i64>,
    inv: Vec<i64>,
}

fn matmul(a: &[i64], b: &[i64], r: usize) -> Vec<i64> {
    let mut out = vec![0; r * r];
    for i in 0..r {
        for k in 0..r {
            let x = a[i * r + k];
            if x != 0 {
                for j in 0..r {
                    out[i * r + j] += x * b[k * r + j];
                }
            }
        }
    }
    out
}

fn matvec(a: &[i64], v: &[i64], r: usize) -> Vec<i64> {
    (0..r)
        .map(|i| (0..r).map(|j| a[i * r + j] * v[j]).sum())
        .collect()
}

impl FiniteWeyl {
    pub(crate) fn from_matrices(m: Vec<i64>, inv: Vec<i64>) -> FiniteWeyl {
        FiniteWeyl { m, inv }
    }

    pub(crate) fn inverse_matrix(&self) -> &[i64] {
        &self.inv
    }

    pub fn identity(r: usize) -> FiniteWeyl {
        let mut m = vec![0; r * r];
        for i in 0..r {
            m[i * r + i] = 1;
        }
        FiniteWeyl { m: m.clone(), inv: m }
    }

    pub fn rank(&self) -> usize {
        (self.m.len() as f64).sqrt().round() as usize
    }

    /// Row-major matrix acting on coweight coordinates.
    pub fn matrix(&self) -> &[i64] {
        &self.m
    }

    pub fn inverse(&self) -> FiniteWeyl {
        FiniteWeyl {
            m: self.inv.clone(),
            inv: self.m.clone(),
        }
    }

    pub fn compose(&self, other: &FiniteWeyl) -> FiniteWeyl {
        let r = self.rank();
        FiniteWeyl {
            m: matmul(&self.m, &other.m, r),
            inv: matmul(&other.inv, &self.inv, r),
        }
    }

    pub fn act(&self, lam: &[i64]) -> Vec<i64> {
        matvec(&self.m, lam, self.rank())
    }

    pub fn act_inverse(&self, lam: &[i64]) -> Vec<i64> {
        matvec(&self.inv, lam, self.rank())
    }

    pub fn is_identity(&self) -> bool {
        let r = self.rank();
        (0..r).all(|i| (0..r).all(|j| self.m[i * r + j] == (i == j) as i64))
    }

    /// Image of a root (simple-root coordinates) under this element.
    pub fn act_root(&self, beta: &[i64]) -> Vec<i64> {
        let r = self.rank();
        (0..r)
            .map(|i| (0..r).map(|j| beta[j] * self.inv[j * r + i]).sum())
            .collect()
    }

    /// Image of a root under the inverse element.
    pub fn act_root_inverse(&self, beta: &[i64]) -> Vec<i64> {
        let r = self.rank();
        (0..r)
            .map(|i| (0..r).map(|j| beta[j] * self.m[j * r + i]).sum())
            .collect()
    }

    /// Sign of `w(beta)`: `+1` for positive roots, `-1` for negative ones.
    fn sign_of_image(&self, beta: &[i64]) -> i64 {
        let r = self.rank();
        let h: i64 = (0..r)
            .map(|j| beta[j] * (0..r).map(|i| self.inv[j * r + i]).sum::<i64>())
            .sum();
        h.signum()
    }

    /// Sign of `w^{-1}(beta)`.
    fn sign_of_preimage(&self, beta: &[i64]) -> i64 {
        let r = self.rank();
        let h: i64 = (0..r)
            .map(|j| beta[j] * (0..r).map(|i| self.m[j * r + i]).sum::<i64>())
            .sum();
        h.signum()
    }
}

/// The element `epsilon^lam * fin` of the extended affine Weyl group.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AffineElement {
    lam: Vec<i64>,
    fin: FiniteWeyl,
}

impl AffineElement {
    pub fn lam(&self) -> &[i64] {
        &self.lam
    }

    pub fn fin(&self) -> &FiniteWeyl {
        &self.fin
    }

    pub fn from_parts(lam: Vec<i64>, fin: FiniteWeyl) -> AffineElement {
        AffineElement { lam, fin }
    }

    pub fn is_translation(&self) -> bool {
        self.fin.is_identity()
    }

    /// Image of a rational point of the apartment.
    pub fn act_point(&self, v: &[Rational64]) -> Vec<Rational64> {
        let r = self.lam.len();
        (0..r)
            .map(|i| {
                let s: Rational64 = (0..r)
                    .map(|j| Rational64::from_integer(self.fin.m[i * r + j]) * v[j])
                    .sum();
                s + Rational64::from_integer(self.lam[i])
            })
            .collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CosetSide {
    Left,
    Right,
    Double,
}

/// Affine root attached to a node: the function `v -> <beta, v> + c`.
#[derive(Clone, Debug)]
pub struct AffineNode {
    pub beta: Vec<i64>,
    pub c: i64,
    pub component: usize,
}

#[derive(Clone, Debug)]
pub struct AffineWeyl {
    rd: RootDatum,
    nodes: Vec<AffineNode>,
    simple: Vec<AffineElement>,
    omega_elems: Vec<AffineElement>,
    omega_perm: Vec<Vec<usize>>,
    commute: Vec<Vec<bool>>,
}

impl AffineWeyl {
    pub fn new(rd: RootDatum) -> AffineWeyl {
        let r = rd.rank();
        let mut nodes = Vec::new();
        let theta_node = |ci: usize| AffineNode {
            beta: rd.highest_roots()[ci].iter().map(|x| -x).collect(),
            c: 1,
            component: ci,
        };
        nodes.push(theta_node(0));
        for i in 0..r {
            let mut e = vec![0; r];
            e[i] = 1;
            let component = rd
                .components()
                .iter()
                .position(|c| i >= c.offset && i < c.offset + c.rank)
                .unwrap();
            nodes.push(AffineNode { beta: e, c: 0, component });
        }
        for ci in 1..rd.components().len() {
            nodes.push(theta_node(ci));
        }

        let finite_simple: Vec<FiniteWeyl> = (0..r)
            .map(|i| {
                let mut m = vec![0; r * r];
                for k in 0..r {
                    m[k * r + k] = 1;
                    m[k * r + i] -= rd.cartan()[i][k];
                }
                FiniteWeyl { m: m.clone(), inv: m }
            })
            .collect();
        let mut g = AffineWeyl {
            rd,
            nodes,
            simple: Vec::new(),
            omega_elems: Vec::new(),
            omega_perm: Vec::new(),
            commute: Vec::new(),
        };
        let mut simple = Vec::new();
        for (idx, node) in g.nodes.iter().enumerate() {
            if node.c == 0 {
                simple.push(AffineElement {
                    lam: vec![0; r],
                    fin: finite_simple[idx - 1].clone(),
                });
            } else {
                let theta: Vec<i64> = node.beta.iter().map(|x| -x).collect();
                let k = g.rd.root_index(&theta).unwrap();
                let coroot = g.rd.coroot_coweights()[k].clone();
                let fin = g.reflection_matrix(&theta, &coroot);
                simple.push(AffineElement { lam: coroot, fin });
            }
        }
        g.simple = simple;
        let n = g.nodes.len();
        g.commute = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| g.mul(&g.simple[i], &g.simple[j]) == g.mul(&g.simple[j], &g.simple[i]))
                    .collect()
            })
            .collect();
        g.omega_elems = (0..g.rd.omega().order())
            .map(|k| g.minimal_in_finite_coset(g.translation(g.rd.omega().rep(k).to_vec())))
            .collect();
        g.omega_perm = g
            .omega_elems
            .iter()
            .map(|t| {
                let ti = g.inverse(t);
                (0..n)
                    .map(|i| {
                        let c = g.mul(&g.mul(t, &g.simple[i]), &ti);
                        g.simple.iter().position(|s| *s == c).unwrap()
                    })
                    .collect()
            })
            .collect();
        g
    }

    fn reflection_matrix(&self, root: &[i64], coroot_cw: &[i64]) -> FiniteWeyl {
        let r = self.rank();
        let mut m = vec![0; r * r];
        for k in 0..r {
            m[k * r + k] = 1;
            for j in 0..r {
                m[k * r + j] -= coroot_cw[k] * root[j];
            }
        }
        FiniteWeyl { m: m.clone(), inv: m }
    }

    fn minimal_in_finite_coset(&self, mut x: AffineElement) -> AffineElement {
        let fin: Vec<usize> = (1..=self.rank()).collect();
        while let Some(&i) = fin.iter().find(|&&i| self.is_right_descent(&x, i)) {
            x = self.mul(&x, &self.simple[i]);
        }
        x
    }

    pub fn root_datum(&self) -> &RootDatum {
        &self.rd
    }

    pub fn rank(&self) -> usize {
        self.rd.rank()
    }

    /// Number of affine nodes; node 0 is the affine node of the first
    /// component, nodes `1..=rank` are finite, later nodes are the affine
    /// nodes of further components.
    pub fn num_nodes(&self) -> usize {
        self.nodes.len()
    }

    pub fn all_nodes(&self) -> NodeSet {
        NodeSet::full(self.num_nodes())
    }

    pub fn node(&self, i: usize) -> &AffineNode {
        &self.nodes[i]
    }

    pub fn check_node(&self, i: usize) -> Result<()> {
        if i >= self.num_nodes() {
            return Err(Error::InvalidNode {
                node: i,
                count: self.num_nodes(),
            });
        }
        Ok(())
    }

    pub fn check_nodes(&self, k: NodeSet) -> Result<()> {
        match k.iter().find(|&i| i >= self.num_nodes()) {
            Some(i) => self.check_node(i),
            None => Ok(()),
        }
    }

    pub fn identity(&self) -> AffineElement {
        AffineElement {
            lam: vec![0; self.rank()],
            fin: FiniteWeyl::identity(self.rank()),
        }
    }

    pub fn simple_reflection(&self, i: usize) -> Result<AffineElement> {
        self.check_node(i)?;
        Ok(self.simple[i].clone())
    }

    pub(crate) fn s(&self, i: usize) -> &AffineElement {
        &self.simple[i]
    }

    pub fn translation(&self, lam: Vec<i64>) -> AffineElement {
        AffineElement {
            lam,
            fin: FiniteWeyl::identity(self.rank()),
        }
    }

    pub fn translation_checked(&self, lam: Vec<i64>) -> Result<AffineElement> {
        self.rd.check_dim(lam.len())?;
        Ok(self.translation(lam))
    }

    pub fn finite_simple(&self, i: usize) -> Result<FiniteWeyl> {
        if i == 0 || i > self.rank() {
            return Err(Error::InvalidNode {
                node: i,
                count: self.rank() + 1,
            });
        }
        Ok(self.simple[i].fin.clone())
    }

    pub fn finite_from_word(&self, word: &[usize]) -> Result<FiniteWeyl> {
        let mut w = FiniteWeyl::identity(self.rank());
        for &i in word {
            w = w.compose(&self.finite_simple(i)?);
        }
        Ok(w)
    }

    pub fn finite_to_element(&self, w: &FiniteWeyl) -> AffineElement {
        AffineElement {
            lam: vec![0; self.rank()],
            fin: w.clone(),
        }
    }

    pub fn mul(&self, x: &AffineElement, y: &AffineElement) -> AffineElement {
        let wl = x.fin.act(&y.lam);
        AffineElement {
            lam: x.lam.iter().zip(&wl).map(|(a, b)| a + b).collect(),
            fin: x.fin.compose(&y.fin),
        }
    }

    pub fn mul_checked(&self, x: &AffineElement, y: &AffineElement) -> Result<AffineElement> {
        self.check_element(x)?;
        self.check_element(y)?;
        Ok(self.mul(x, y))
    }

    pub fn check_element(&self, x: &AffineElement) -> Result<()> {
        self.rd.check_dim(x.lam.len())?;
        let r2 = x.fin.m.len();
        if r2 != self.rank() * self.rank() || x.fin.inv.len() != r2 {
            return Err(Error::DimensionMismatch {
                expected: self.rank() * self.rank(),
                got: r2,
            });
        }
        Ok(())
    }

    pub fn inverse(&self, x: &AffineElement) -> AffineElement {
        let l = x.fin.act_inverse(&x.lam);
        AffineElement {
            lam: l.into_iter().map(|a| -a).collect(),
            fin: x.fin.inverse(),
        }
    }

    pub fn mul_word(&self, word: &[usize]) -> Result<AffineElement> {
        let mut x = self.identity();
        for &i in word {
            self.check_node(i)?;
            x = self.mul(&x, &self.simple[i]);
        }
        Ok(x)
    }

    /// `word * tau^omega`.
    pub fn from_word(&self, word: &[usize], omega: usize) -> Result<AffineElement> {
        let x = self.mul_word(word)?;
        let t = self.omega_element(omega)?;
        Ok(self.mul(&x, &t))
    }

    /// Number of affine root hyperplanes separating the base alcove from `x` of it.
    pub fn length(&self, x: &AffineElement) -> usize {
        let r = self.rank();
        let wr: Vec<i64> = (0..r)
            .map(|i| (0..r).map(|j| x.fin.m[i * r + j]).sum())
            .collect();
        let mut total = 0i64;
        for alpha in self.rd.positive_roots() {
            let mut p = 0;
            let mut s = 0;
            for j in 0..r {
                p += alpha[j] * x.lam[j];
                s += alpha[j] * wr[j];
            }
            total += if s > 0 { p.abs() } else { (p - 1).abs() };
        }
        total as usize
    }

    /// `l(x s_i) < l(x)`.
    pub fn is_right_descent(&self, x: &AffineElement, i: usize) -> bool {
        let node = &self.nodes[i];
        let wl = x.fin.act_inverse(&x.lam);
        let k: i64 = node.c - node.beta.iter().zip(&wl).map(|(a, b)| a * b).sum::<i64>();
        k < 0 || (k == 0 && x.fin.sign_of_image(&node.beta) < 0)
    }

    /// `l(s_i x) < l(x)`.
    pub fn is_left_descent(&self, x: &AffineElement, i: usize) -> bool {
        let node = &self.nodes[i];
        let k: i64 = node.c + node.beta.iter().zip(&x.lam).map(|(a, b)| a * b).sum::<i64>();
        k < 0 || (k == 0 && x.fin.sign_of_preimage(&node.beta) < 0)
    }

    pub fn right_descents(&self, x: &AffineElement) -> NodeSet {
        (0..self.num_nodes())
            .filter(|&i| self.is_right_descent(x, i))
            .collect()
    }

    pub fn left_descents(&self, x: &AffineElement) -> NodeSet {
        (0..self.num_nodes())
            .filter(|&i| self.is_left_descent(x, i))
            .collect()
    }

    pub fn omega_part(&self, x: &AffineElement) -> usize {
        self.rd.omega_class(&x.lam)
    }

    /// The length-zero element representing Omega class `k`.
    pub fn omega_element(&self, k: usize) -> Result<AffineElement> {
        self.omega_elems.get(k).cloned().ok_or_else(|| {
            Error::InvalidArgument(format!(
                "Omega class {k} out of range (order {})",
                self.omega_elems.len()
            ))
        })
    }

    pub fn omega_order(&self) -> usize {
        self.omega_elems.len()
    }

    /// Node permutation `i -> j` with `tau s_i tau^{-1} = s_j` for Omega class `k`.
    pub fn omega_node_action(&self, k: usize) -> &[usize] {
        &self.omega_perm[k]
    }

    /// The affine Weyl group part `x tau^{-1}` of `x`.
    pub fn wa_part(&self, x: &AffineElement) -> AffineElement {
        let k = self.omega_part(x);
        if k == 0 {
            return x.clone();
        }
        self.mul(x, &self.inverse(&self.omega_elems[k]))
    }

    pub fn in_wa(&self, x: &AffineElement) -> bool {
        self.omega_part(x) == 0
    }

    /// Lexicographically smallest reduced word of the affine Weyl group part,
    /// together with the Omega class.
    pub fn reduced_word(&self, x: &AffineElement) -> (Vec<usize>, usize) {
        let mut y = x.clone();
        let mut word = Vec::new();
        'outer: loop {
            for i in 0..self.num_nodes() {
                if self.is_left_descent(&y, i) {
                    word.push(i);
                    y = self.mul(&self.simple[i], &y);
                    continue 'outer;
                }
            }
            break;
        }
        (word, self.omega_part(x))
    }

    pub fn support(&self, x: &AffineElement) -> NodeSet {
        self.reduced_word(x).0.into_iter().collect()
    }

    /// Bruhat order; elements in different Omega classes are incomparable.
    pub fn bruhat_leq(&self, x: &AffineElement, y: &AffineElement) -> bool {
        if self.omega_part(x) != self.omega_part(y) {
            return false;
        }
        let mut x = self.wa_part(x);
        let mut y = self.wa_part(y);
        let mut lx = self.length(&x);
        let mut ly = self.length(&y);
        loop {
            if lx > ly {
                return false;
            }
            if ly == 0 {
                return lx == 0;
            }
            let s = (0..self.num_nodes())
                .find(|&i| self.is_right_descent(&y, i))
                .unwrap();
            y = self.mul(&y, &self.simple[s]);
            ly -= 1;
            if self.is_right_descent(&x, s) {
                x = self.mul(&x, &self.simple[s]);
                lx -= 1;
            }
        }
    }

    /// Sort key: length, then reduced word, then Omega class.
    pub fn canonical_key(&self, x: &AffineElement) -> (usize, Vec<usize>, usize) {
        let (w, k) = self.reduced_word(x);
        (w.len(), w, k)
    }

    pub fn sort_canonical(&self, xs: &mut Vec<AffineElement>) {
        let mut keyed: Vec<_> = xs
            .drain(..)
            .map(|x| (self.canonical_key(&x), x))
            .collect();
        keyed.sort_by(|a, b| a.0.cmp(&b.0));
        xs.extend(keyed.into_iter().map(|(_, x)| x));
    }

    /// `{ w : w <= epsilon^{v(mu)} for some v in W_0 }`, canonically sorted.
    pub fn admissible_set(&self, mu: &[i64]) -> Result<Vec<AffineElement>> {
        self.rd.check_dim(mu.len())?;
        let mut seen: HashSet<AffineElement> = HashSet::new();
        let mut queue: VecDeque<AffineElement> = VecDeque::new();
        for v in self.rd.coweight_orbit(mu) {
            let t = self.translation(v);
            if seen.insert(t.clone()) {
                queue.push_back(t);
            }
        }
        while let Some(z) = queue.pop_front() {
            let (word, k) = self.reduced_word(&z);
            if word.is_empty() {
                continue;
            }
            let tau = &self.omega_elems[k];
            for d in 0..word.len() {
                let mut y = self.identity();
                for (p, &i) in word.iter().enumerate() {
                    if p != d {
                        y = self.mul(&y, &self.simple[i]);
                    }
                }
                let y = self.mul(&y, tau);
                if self.length(&y) + 1 == word.len() && seen.insert(y.clone()) {
                    queue.push_back(y);
                }
            }
        }
        let mut out: Vec<_> = seen.into_iter().collect();
        self.sort_canonical(&mut out);
        Ok(out)
    }

    fn reduce_left(&self, mut x: AffineElement, k: NodeSet) -> AffineElement {
        while let Some(i) = k.iter().find(|&i| self.is_left_descent(&x, i)) {
            x = self.mul(&self.simple[i], &x);
        }
        x
    }

    fn reduce_right(&self, mut x: AffineElement, k: NodeSet) -> AffineElement {
        while let Some(i) = k.iter().find(|&i| self.is_right_descent(&x, i)) {
            x = self.mul(&x, &self.simple[i]);
        }
        x
    }

    /// Minimal length element of `W_K x`, `x W_K` or `W_K x W_{K2}`.
    pub fn min_coset_rep(
        &self,
        x: &AffineElement,
        k: NodeSet,
        side: CosetSide,
        k2: NodeSet,
    ) -> Result<AffineElement> {
        self.check_nodes(k)?;
        self.check_nodes(k2)?;
        Ok(match side {
            CosetSide::Left => self.reduce_left(x.clone(), k),
            CosetSide::Right => self.reduce_right(x.clone(), k),
            CosetSide::Double => self.min_double(x, k, k2),
        })
    }

    pub fn min_left(&self, x: &AffineElement, k: NodeSet) -> AffineElement {
        self.reduce_left(x.clone(), k)
    }

    pub fn min_right(&self, x: &AffineElement, k: NodeSet) -> AffineElement {
        self.reduce_right(x.clone(), k)
    }

    pub fn min_double(&self, x: &AffineElement, k: NodeSet, k2: NodeSet) -> AffineElement {
        let mut y = x.clone();
        loop {
            y = self.reduce_left(y, k);
            if !k2.iter().any(|i| self.is_right_descent(&y, i)) {
                return y;
            }
            y = self.reduce_right(y, k2);
            if !k.iter().any(|i| self.is_left_descent(&y, i)) {
                return y;
            }
        }
    }

    /// True when `s_i s_j = s_j s_i`.
    pub fn commute(&self, i: usize, j: usize) -> bool {
        self.commute[i][j]
    }

    pub fn dynkin_adjacent(&self, i: usize, j: usize) -> bool {
        i != j && !self.commute[i][j]
    }

    /// Nodes outside `p` adjacent to some node of `p`.
    pub fn neighbours(&self, p: NodeSet) -> NodeSet {
        (0..self.num_nodes())
            .filter(|&j| !p.contains(j) && p.iter().any(|i| self.dynkin_adjacent(i, j)))
            .collect()
    }

    /// Whether the parabolic subgroup `W_P` is finite.
    pub fn is_finite_parabolic(&self, p: NodeSet) -> bool {
        let ncomp = self.rd.components().len();
        (0..ncomp).all(|ci| {
            (0..self.num_nodes())
                .filter(|&i| self.nodes[i].component == ci)
                .any(|i| !p.contains(i))
        })
    }

    /// Longest element of a finite parabolic subgroup `W_P`.
    pub fn longest_element(&self, p: NodeSet) -> Result<AffineElement> {
        self.check_nodes(p)?;
        if !self.is_finite_parabolic(p) {
            return Err(Error::InvalidArgument(format!(
                "parabolic subgroup of type {:?} is infinite",
                p
            )));
        }
        let mut x = self.identity();
        while let Some(i) = p.iter().find(|&i| !self.is_right_descent(&x, i)) {
            x = self.mul(&x, &self.simple[i]);
        }
        Ok(x)
    }

    /// All elements of a finite parabolic subgroup `W_P`, canonically sorted.
    pub fn parabolic_elements(&self, p: NodeSet) -> Result<Vec<AffineElement>> {
        let w0 = self.longest_element(p)?;
        let top = self.length(&w0);
        let mut layer = vec![self.identity()];
        let mut all: HashSet<AffineElement> = layer.iter().cloned().collect();
        for _ in 0..top {
            let mut next = Vec::new();
            for x in &layer {
                for i in p.iter() {
                    if !self.is_right_descent(x, i) {
                        let y = self.mul(x, &self.simple[i]);
                        if all.insert(y.clone()) {
                            next.push(y);
                        }
                    }
                }
            }
            layer = next;
        }
        let mut out: Vec<_> = all.into_iter().collect();
        self.sort_canonical(&mut out);
        Ok(out)
    }

    /// Elements of `W_a` (trivial Omega part) of length at most `radius`, in
    /// canonical order.
    pub fn wa_ball(&self, radius: usize) -> Vec<AffineElement> {
        let mut layer = vec![self.identity()];
        let mut all: Vec<AffineElement> = layer.clone();
        let mut seen: HashSet<AffineElement> = layer.iter().cloned().collect();
        for _ in 0..radius {
            let mut next = Vec::new();
            for x in &layer {
                for i in 0..self.num_nodes() {
                    if !self.is_right_descent(x, i) {
                        let y = self.mul(x, &self.simple[i]);
                        if seen.insert(y.clone()) {
                            next.push(y);
                        }
                    }
                }
            }
            all.extend(next.iter().cloned());
            layer = next;
        }
        self.sort_canonical(&mut all);
        all
    }

    /// All elements of the finite Weyl group.
    pub fn finite_weyl_group(&self) -> Result<Vec<FiniteWeyl>> {
        let r = self.rank();
        let mut order: usize = 1;
        for c in self.rd.components() {
            let n = c.rank;
            let f: usize = (1..=n).product();
            order = order.saturating_mul(match c.ty {
                crate::root_datum::DynkinType::A => f * (n + 1),
                crate::root_datum::DynkinType::B | crate::root_datum::DynkinType::C => f << n,
                crate::root_datum::DynkinType::D => f << (n - 1),
            });
        }
        if order > 2_000_000 {
            return Err(Error::Guard(format!("finite Weyl group of order {order}")));
        }
        let gens: Vec<FiniteWeyl> = (1..=r).map(|i| self.simple[i].fin.clone()).collect();
        let mut seen: HashSet<FiniteWeyl> = HashSet::new();
        let mut out = Vec::new();
        let mut queue = VecDeque::from([FiniteWeyl::identity(r)]);
        seen.insert(FiniteWeyl::identity(r));
        while let Some(w) = queue.pop_front() {
            for g in &gens {
                let v = w.compose(g);
                if seen.insert(v.clone()) {
                    queue.push_back(v);
                }
            }
            out.push(w);
        }
        Ok(out)
    }

    /// Reduced word (over finite nodes `1..=rank`) of a finite Weyl element.
    pub fn finite_reduced_word(&self, w: &FiniteWeyl) -> Vec<usize> {
        self.reduced_word(&self.finite_to_element(w)).0
    }

    /// Whether `t` satisfies the chain hypothesis: pairwise distinct nodes
    /// with consecutive entries not commuting.
    pub fn check_chain(&self, t: &[usize]) -> Result<()> {
        for &i in t {
            self.check_node(i)?;
        }
        let distinct: HashSet<_> = t.iter().collect();
        if distinct.len() != t.len() {
            return Err(Error::Hypothesis(format!("chain {t:?} repeats a node")));
        }
        for w in t.windows(2) {
            if self.commute(w[0], w[1]) {
                return Err(Error::Hypothesis(format!(
                    "consecutive nodes {} and {} commute",
                    w[0], w[1]
                )));
            }
        }
        Ok(())
    }

    /// Whether the chosen reduced word of `w` contains `t` as a subsequence.
    pub fn subexpression_check(&self, t: &[usize], w: &AffineElement) -> Result<bool> {
        self.check_chain(t)?;
        let (word, _) = self.reduced_word(w);
        Ok(is_subsequence(t, &word))
    }

    /// The image of the base alcove barycenter under `x`.
    pub fn barycenter(&self, x: &AffineElement) -> Vec<Rational64> {
        x.act_point(&self.base_barycenter())
    }

    /// Barycenter of the base alcove in fundamental-coweight coordinates.
    pub fn base_barycenter(&self) -> Vec<Rational64> {
        let r = self.rank();
        let mut v = vec![Rational64::from_integer(0); r];
        for (ci, c) in self.rd.components().iter().enumerate() {
            let theta = &self.rd.highest_roots()[ci];
            let denom = (c.rank + 1) as i64;
            for i in c.offset..c.offset + c.rank {
                v[i] = Rational64::new(1, theta[i] * denom);
            }
        }
        v
    }

    /// Map from elements to an index, for bulk lookups.
    pub fn index_map(xs: &[AffineElement]) -> HashMap<AffineElement, usize> {
        xs.iter().cloned().enumerate().map(|(i, x)| (x, i)).collect()
    }
}

pub fn is_subsequence(t: &[usize], word: &[usize]) -> bool {
    let mut it = word.iter();
    t.iter().all(|a| it.any(|b| b == a))
}
