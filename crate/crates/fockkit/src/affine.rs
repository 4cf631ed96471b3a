//! Affine weights of `gl_m-hat`, the affine symmetric group in window
//! notation, and the linkage order at negative level.
//!
//! A weight is stored in coordinates `(delta, classical, level)` for the
//! basis `(delta, eps_1..eps_m, omega_0)`. The invariant symmetric pairing
//! is `<eps_i : eps_j> = delta_{ij}`, `<delta : omega_0> = 1`, all other
//! pairs zero (in particular `<delta : delta> = <omega_0 : omega_0> = 0`).
//!
//! The affine symmetric group element `w` is stored by its window
//! `[w(1), ..., w(m)]`, extended by `w(i + m) = w(i) + m`. Products use
//! function composition: `(a * b)(i) = a(b(i))`. The translation part
//! acts on a weight of level `kappa` by adding `kappa * tau` to the
//! classical coordinates, so at negative level longer elements move
//! weights down the dominance order.

use crate::combinatorics::Composition;
use crate::rat::{is_integer, is_positive_integer, rat, Rat};
use crate::{Error, Result};
use num::{Signed, Zero};
use std::collections::{BTreeSet, VecDeque};
use std::fmt;

/// A weight of `gl_m-hat` in `(delta, classical, level)` coordinates.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AffineWeight {
    pub delta: Rat,
    pub classical: Vec<Rat>,
    pub level: Rat,
}

impl AffineWeight {
    pub fn new(delta: Rat, classical: Vec<Rat>, level: Rat) -> Self {
        AffineWeight {
            delta,
            classical,
            level,
        }
    }

    /// Purely classical weight (delta and level zero).
    pub fn classical_only(classical: Vec<Rat>) -> Self {
        AffineWeight::new(Rat::zero(), classical, Rat::zero())
    }

    /// Classical weight from integers, with given level and zero delta.
    pub fn from_ints(classical: &[i64], level: Rat) -> Self {
        AffineWeight::new(
            Rat::zero(),
            classical.iter().map(|&x| rat(x as i128)).collect(),
            level,
        )
    }

    pub fn rank(&self) -> usize {
        self.classical.len()
    }

    /// The shift `rho-hat = (m, m-1, ..., 1) + m * omega_0`.
    pub fn rho_hat(m: usize) -> Self {
        AffineWeight::new(
            Rat::zero(),
            (1..=m).rev().map(|i| rat(i as i128)).collect(),
            rat(m as i128),
        )
    }

    /// Invariant symmetric pairing.
    pub fn pairing(&self, other: &AffineWeight) -> Rat {
        assert_eq!(self.rank(), other.rank(), "rank mismatch in pairing");
        let mut acc = self.delta * other.level + self.level * other.delta;
        for (a, b) in self.classical.iter().zip(&other.classical) {
            acc += *a * *b;
        }
        acc
    }

    pub fn plus(&self, other: &AffineWeight) -> AffineWeight {
        assert_eq!(self.rank(), other.rank());
        AffineWeight::new(
            self.delta + other.delta,
            self.classical
                .iter()
                .zip(&other.classical)
                .map(|(a, b)| *a + *b)
                .collect(),
            self.level + other.level,
        )
    }

    pub fn minus(&self, other: &AffineWeight) -> AffineWeight {
        assert_eq!(self.rank(), other.rank());
        AffineWeight::new(
            self.delta - other.delta,
            self.classical
                .iter()
                .zip(&other.classical)
                .map(|(a, b)| *a - *b)
                .collect(),
            self.level - other.level,
        )
    }

    /// True when all classical coordinates are integers.
    pub fn classical_integral(&self) -> bool {
        self.classical.iter().all(is_integer)
    }

    /// The delta coordinate pinned by normalization at level `kappa`:
    /// `z = -<classical : 2 rho + classical> / (2 kappa)`, which makes
    /// `<x + rho-hat : x + rho-hat>` constant along the dot orbit.
    pub fn normalized_delta(classical: &[Rat], kappa: Rat) -> Rat {
        assert!(!kappa.is_zero(), "kappa must be nonzero");
        let m = classical.len();
        let mut acc = Rat::zero();
        for (i, c) in classical.iter().enumerate() {
            let rho_i = rat((m - i) as i128);
            acc += *c * (rat(2) * rho_i + *c);
        }
        -acc / (rat(2) * kappa)
    }

    /// Replace the delta coordinate by its normalized value for `kappa`.
    pub fn tilde_normalized(&self, kappa: Rat) -> AffineWeight {
        AffineWeight::new(
            AffineWeight::normalized_delta(&self.classical, kappa),
            self.classical.clone(),
            self.level,
        )
    }
}

impl fmt::Display for AffineWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[delta={}; ", crate::rat::format_rat(&self.delta))?;
        for (i, c) in self.classical.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", crate::rat::format_rat(c))?;
        }
        write!(f, "; level={}]", crate::rat::format_rat(&self.level))
    }
}

/// A real affine root `eps_a - eps_b + k * delta` (1-based `a != b`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct AffineRoot {
    pub a: usize,
    pub b: usize,
    pub k: i64,
}

impl AffineRoot {
    /// Pairing of a weight with this root.
    pub fn pair(&self, x: &AffineWeight) -> Rat {
        x.classical[self.a - 1] - x.classical[self.b - 1] + rat(self.k as i128) * x.level
    }

    /// Reflect `x` in this root: `x - <x : root> * root` (the root is its
    /// own coroot under the normalized pairing).
    pub fn reflect(&self, x: &AffineWeight) -> AffineWeight {
        let p = self.pair(x);
        let mut y = x.clone();
        y.classical[self.a - 1] -= p;
        y.classical[self.b - 1] += p;
        y.delta -= p * rat(self.k as i128);
        y
    }
}

/// An affine permutation in window notation.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AffinePermutation {
    window: Vec<i64>,
}

impl AffinePermutation {
    /// Validate and build from a window `[w(1), ..., w(m)]`.
    pub fn new(window: Vec<i64>) -> Result<Self> {
        let m = window.len();
        if m == 0 {
            return Err(Error::InvalidInput("empty window".into()));
        }
        let mi = m as i64;
        let mut residues: Vec<i64> = window.iter().map(|&v| (v - 1).rem_euclid(mi)).collect();
        residues.sort_unstable();
        if residues != (0..mi).collect::<Vec<_>>() {
            return Err(Error::InvalidInput(format!(
                "window residues not a permutation of Z/{m}: {window:?}"
            )));
        }
        let shift: i64 = window.iter().sum::<i64>() - (1..=mi).sum::<i64>();
        if shift != 0 {
            return Err(Error::InvalidInput(format!(
                "window offsets do not sum to zero: {window:?}"
            )));
        }
        Ok(AffinePermutation { window })
    }

    pub fn identity(m: usize) -> Self {
        AffinePermutation {
            window: (1..=m as i64).collect(),
        }
    }

    /// Simple generator `s_i`, `i` in `0..m` (`s_0` is the affine one).
    pub fn simple(i: usize, m: usize) -> Self {
        assert!(m >= 2, "no simple reflections for m < 2");
        assert!(i < m, "generator index out of range");
        let mut w: Vec<i64> = (1..=m as i64).collect();
        if i == 0 {
            w[0] = 0;
            w[m - 1] = m as i64 + 1;
        } else {
            w.swap(i - 1, i);
        }
        AffinePermutation { window: w }
    }

    pub fn window(&self) -> &[i64] {
        &self.window
    }

    pub fn rank(&self) -> usize {
        self.window.len()
    }

    pub fn is_identity(&self) -> bool {
        self.window.iter().enumerate().all(|(i, &v)| v == i as i64 + 1)
    }

    /// Evaluate at an arbitrary integer via `w(i + m) = w(i) + m`.
    pub fn eval(&self, j: i64) -> i64 {
        let m = self.window.len() as i64;
        let i0 = (j - 1).rem_euclid(m) + 1;
        let q = (j - i0) / m;
        self.window[(i0 - 1) as usize] + m * q
    }

    /// Function composition: `(self * other)(i) = self(other(i))`.
    pub fn mul(&self, other: &AffinePermutation) -> AffinePermutation {
        assert_eq!(self.rank(), other.rank());
        AffinePermutation {
            window: other.window.iter().map(|&v| self.eval(v)).collect(),
        }
    }

    pub fn inverse(&self) -> AffinePermutation {
        let m = self.window.len();
        let mi = m as i64;
        let mut inv = vec![0i64; m];
        for (i, &v) in self.window.iter().enumerate() {
            let r = (v - 1).rem_euclid(mi) + 1;
            let q = (v - r) / mi;
            inv[(r - 1) as usize] = (i as i64 + 1) - mi * q;
        }
        AffinePermutation { window: inv }
    }

    /// Coxeter length via the affine inversion count
    /// `sum_{i<j} |floor((w(j) - w(i)) / m)|`.
    pub fn length(&self) -> usize {
        let m = self.window.len() as i64;
        let mut total: i64 = 0;
        for i in 0..self.window.len() {
            for j in (i + 1)..self.window.len() {
                total += (self.window[j] - self.window[i]).div_euclid(m).abs();
            }
        }
        total as usize
    }

    /// True when `l(w * s_i) < l(w)`.
    pub fn is_right_descent(&self, i: usize) -> bool {
        let m = self.window.len();
        assert!(i < m);
        if i == 0 {
            self.window[m - 1] - m as i64 > self.window[0]
        } else {
            self.window[i - 1] > self.window[i]
        }
    }

    /// All right descents, ascending.
    pub fn right_descents(&self) -> Vec<usize> {
        (0..self.rank())
            .filter(|&i| self.is_right_descent(i))
            .collect()
    }

    /// True when `l(s_i * w) < l(w)`.
    pub fn is_left_descent(&self, i: usize) -> bool {
        self.inverse().is_right_descent(i)
    }

    /// Canonical reduced word (repeatedly strip the smallest right
    /// descent); the returned letters multiply left-to-right to `self`.
    pub fn reduced_word(&self) -> Vec<usize> {
        let mut w = self.clone();
        let mut stripped = Vec::new();
        while !w.is_identity() {
            let i = (0..w.rank())
                .find(|&i| w.is_right_descent(i))
                .expect("non-identity element must have a right descent");
            w = w.mul(&AffinePermutation::simple(i, w.rank()));
            stripped.push(i);
        }
        stripped.reverse();
        stripped
    }

    /// Product of simple generators, left-to-right.
    pub fn from_word(word: &[usize], m: usize) -> AffinePermutation {
        let mut w = AffinePermutation::identity(m);
        for &i in word {
            w = w.mul(&AffinePermutation::simple(i, m));
        }
        w
    }

    /// True when the window is a finite permutation of `1..=m`.
    pub fn is_finite(&self) -> bool {
        self.window
            .iter()
            .all(|&v| v >= 1 && v <= self.window.len() as i64)
    }

    /// Linear action on a weight, via the `w = sigma * t_tau`
    /// factorization (`w(i) = sigma(i) + m * tau_i`): first translate by
    /// `tau`, then permute the classical coordinates by `sigma`.
    pub fn act(&self, x: &AffineWeight) -> AffineWeight {
        let m = self.window.len();
        assert_eq!(x.rank(), m, "weight rank mismatch");
        let mi = m as i64;
        let mut sigma = vec![0usize; m];
        let mut tau = vec![0i64; m];
        for (i, &v) in self.window.iter().enumerate() {
            let r = (v - 1).rem_euclid(mi) + 1;
            sigma[i] = r as usize;
            tau[i] = (v - r) / mi;
        }
        // Translation: classical += level * tau,
        // delta -= <classical : tau> + level * <tau : tau> / 2.
        let mut dot = Rat::zero();
        let mut norm = Rat::zero();
        for (c, &t) in x.classical.iter().zip(&tau) {
            dot += *c * rat(t as i128);
            norm += rat((t * t) as i128);
        }
        let new_delta = x.delta - dot - x.level * norm / rat(2);
        let mid: Vec<Rat> = x
            .classical
            .iter()
            .zip(&tau)
            .map(|(c, &t)| *c + x.level * rat(t as i128))
            .collect();
        let mut out = vec![Rat::zero(); m];
        for (i, &si) in sigma.iter().enumerate() {
            out[si - 1] = mid[i];
        }
        AffineWeight::new(new_delta, out, x.level)
    }

    /// Dot action `w . lambda = w(lambda + rho-hat) - rho-hat`.
    pub fn dot(&self, lam: &AffineWeight) -> AffineWeight {
        let rho = AffineWeight::rho_hat(self.rank());
        self.act(&lam.plus(&rho)).minus(&rho)
    }
}

impl fmt::Display for AffinePermutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, v) in self.window.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "]")
    }
}

/// How the level parameter `kappa` is to be treated by the linkage order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KappaMode {
    /// Exact rational `kappa`; roots `beta + k delta` enumerated for all
    /// `k >= 0` with positive integral pairing (finitely many, `kappa < 0`).
    Rational(Rat),
    /// `kappa` irrational: only `k = 0` roots pair integrally.
    Irrational,
}

/// True when the classical coordinates of `lambda` are weakly decreasing
/// with integer steps inside every `nu`-block.
pub fn is_nu_dominant(lam: &AffineWeight, nu: &Composition) -> bool {
    for (i, j) in nu.blocks() {
        for t in i..j {
            let d = lam.classical[t - 1] - lam.classical[t];
            if !is_integer(&d) || d.is_negative() {
                return false;
            }
        }
    }
    true
}

/// True when `lambda + rho-hat` has pairwise distinct entries inside
/// every `nu`-block.
pub fn is_nu_regular_shifted(x: &AffineWeight, nu: &Composition) -> bool {
    for (i, j) in nu.blocks() {
        for s in i..=j {
            for t in (s + 1)..=j {
                if x.classical[s - 1] == x.classical[t - 1] {
                    return false;
                }
            }
        }
    }
    true
}

/// Project `lambda` to its `nu`-dominant conjugate: sort the entries of
/// `lambda + rho-hat` strictly decreasing inside each block. Returns the
/// projected weight and the sign of the sorting permutation.
pub fn nu_project(lam: &AffineWeight, nu: &Composition) -> Result<(AffineWeight, i8)> {
    let m = nu.total() as usize;
    if lam.rank() != m {
        return Err(Error::InvalidInput(format!(
            "weight rank {} does not match |nu| = {m}",
            lam.rank()
        )));
    }
    let rho = AffineWeight::rho_hat(m);
    let mut x = lam.plus(&rho);
    if !is_nu_regular_shifted(&x, nu) {
        return Err(Error::NotNuRegular(format!(
            "{lam} has a repeated entry in a nu-block after the rho shift"
        )));
    }
    let mut inversions = 0usize;
    for (i, j) in nu.blocks() {
        if j <= i {
            continue;
        }
        let block = &mut x.classical[i - 1..j];
        for s in 0..block.len() {
            for t in (s + 1)..block.len() {
                if block[s] < block[t] {
                    inversions += 1;
                }
            }
        }
        block.sort_by(|a, b| b.cmp(a));
    }
    let sign = if inversions % 2 == 0 { 1 } else { -1 };
    Ok((x.minus(&rho), sign))
}

/// Membership of a difference vector in the nonnegative span of the
/// positive affine roots (real and imaginary).
///
/// With classical part `d` and delta coordinate `z`, membership requires
/// integral `d` summing to zero, integral `z >= 0`, and `z` at least the
/// minimal delta cost of repairing the negative prefix sums of `d` with
/// negative-root-plus-delta summands (each repair covers a contiguous
/// interval at cost one).
pub fn in_positive_root_cone(d: &AffineWeight) -> bool {
    if !d.level.is_zero() {
        return false;
    }
    if !d.classical_integral() || !is_integer(&d.delta) || d.delta.is_negative() {
        return false;
    }
    let sum: Rat = d.classical.iter().copied().sum();
    if !sum.is_zero() {
        return false;
    }
    let m = d.rank();
    let mut cost: i128 = 0;
    let mut prev_deficit: i128 = 0;
    let mut prefix = Rat::zero();
    for t in 0..m.saturating_sub(1) {
        prefix += d.classical[t];
        let deficit = if prefix.is_negative() {
            -*prefix.numer()
        } else {
            0
        };
        if deficit > prev_deficit {
            cost += deficit - prev_deficit;
        }
        prev_deficit = deficit;
    }
    rat(cost) <= d.delta
}

/// True when `hi - lo` is a nonzero element of the positive root cone.
pub fn strictly_above(hi: &AffineWeight, lo: &AffineWeight) -> bool {
    let d = hi.minus(lo);
    let zero = d.delta.is_zero() && d.classical.iter().all(|c| c.is_zero());
    !zero && in_positive_root_cone(&d)
}

/// Context for the linkage order on `nu`-dominant weights.
pub struct LinkageContext {
    pub nu: Composition,
    pub kappa: KappaMode,
    /// Node budget for downward searches.
    pub budget: usize,
}

impl LinkageContext {
    pub fn new(nu: Composition, kappa: KappaMode) -> Self {
        LinkageContext {
            nu,
            kappa,
            budget: 1_000_000,
        }
    }

    fn m(&self) -> usize {
        self.nu.total() as usize
    }

    /// Validate a linkage input weight and return it tilde-normalized
    /// (delta pinned by the level; untouched in irrational mode).
    pub fn prepare(&self, lam: &AffineWeight) -> Result<AffineWeight> {
        let m = self.m();
        if lam.rank() != m {
            return Err(Error::InvalidInput(format!(
                "weight rank {} does not match |nu| = {m}",
                lam.rank()
            )));
        }
        if !lam.classical_integral() {
            return Err(Error::Unsupported(
                "linkage order implemented for integral classical weights".into(),
            ));
        }
        if !is_nu_dominant(lam, &self.nu) {
            return Err(Error::InvalidInput(format!(
                "weight {lam} is not nu-dominant for nu = {}",
                self.nu
            )));
        }
        match self.kappa {
            KappaMode::Rational(kappa) => {
                if !kappa.is_negative() {
                    return Err(Error::Unsupported(format!(
                        "kappa must be negative, got {}",
                        crate::rat::format_rat(&kappa)
                    )));
                }
                let expected = kappa - rat(m as i128);
                if lam.level != expected {
                    return Err(Error::InvalidInput(format!(
                        "weight level {} does not equal kappa - m = {}",
                        crate::rat::format_rat(&lam.level),
                        crate::rat::format_rat(&expected)
                    )));
                }
                Ok(lam.tilde_normalized(kappa))
            }
            KappaMode::Irrational => {
                let mut out = lam.clone();
                out.delta = Rat::zero();
                Ok(out)
            }
        }
    }

    /// Enumerate roots `alpha` with `<x : alpha>` a positive integer,
    /// excluding the finite roots of the `nu`-subsystem (`k = 0` inside a
    /// block). `x` is a rho-shifted weight, so its level is `kappa`.
    fn candidate_roots(&self, x: &AffineWeight) -> Vec<(AffineRoot, Rat)> {
        let m = self.m();
        let mut out = Vec::new();
        for a in 1..=m {
            for b in 1..=m {
                if a == b {
                    continue;
                }
                let base = x.classical[a - 1] - x.classical[b - 1];
                let same_block = self.nu.block_of(a) == self.nu.block_of(b);
                match self.kappa {
                    KappaMode::Irrational => {
                        if a < b && !same_block && is_positive_integer(&base) {
                            out.push((AffineRoot { a, b, k: 0 }, base));
                        }
                    }
                    KappaMode::Rational(kappa) => {
                        let k_min: i64 = if a < b { 0 } else { 1 };
                        let mut k = k_min;
                        loop {
                            let p = base + rat(k as i128) * kappa;
                            if !p.is_positive() {
                                break;
                            }
                            let excluded = k == 0 && same_block;
                            if !excluded && is_integer(&p) {
                                out.push((AffineRoot { a, b, k }, p));
                            }
                            k += 1;
                        }
                    }
                }
            }
        }
        out
    }

    /// One downward linkage step: all `nu`-dominant weights obtained from
    /// `mu` by a single admissible reflection-and-project move that lands
    /// strictly below `mu`.
    pub fn step_down(&self, mu: &AffineWeight) -> Vec<AffineWeight> {
        let m = self.m();
        let rho = AffineWeight::rho_hat(m);
        let x = mu.plus(&rho);
        let mut out = BTreeSet::new();
        for (root, _p) in self.candidate_roots(&x) {
            let y = root.reflect(&x);
            if !is_nu_regular_shifted(&y, &self.nu) {
                continue;
            }
            let lam_shift = {
                let mut sorted = y.clone();
                for (i, j) in self.nu.blocks() {
                    if j > i {
                        sorted.classical[i - 1..j].sort_by(|a, b| b.cmp(a));
                    }
                }
                sorted
            };
            if strictly_above(&x, &lam_shift) {
                out.insert(lam_shift.minus(&rho));
            }
        }
        out.into_iter().collect()
    }

    /// The full downward closure of `mu` under the linkage order
    /// (including `mu` itself), deterministically ordered.
    pub fn down_set(&self, mu: &AffineWeight) -> Result<Vec<AffineWeight>> {
        let mu = self.prepare(mu)?;
        let mut seen: BTreeSet<AffineWeight> = BTreeSet::new();
        let mut queue: VecDeque<AffineWeight> = VecDeque::new();
        seen.insert(mu.clone());
        queue.push_back(mu);
        while let Some(x) = queue.pop_front() {
            for y in self.step_down(&x) {
                if seen.insert(y.clone()) {
                    if seen.len() > self.budget {
                        return Err(Error::BudgetExceeded(format!(
                            "linkage down-set exceeded {} nodes",
                            self.budget
                        )));
                    }
                    queue.push_back(y);
                }
            }
        }
        Ok(seen.into_iter().collect())
    }

    /// Decide `lambda <= mu` in the linkage order (reflexive-transitive
    /// closure of single downward steps).
    pub fn leq(&self, lam: &AffineWeight, mu: &AffineWeight) -> Result<bool> {
        let lam = self.prepare(lam)?;
        let mu = self.prepare(mu)?;
        if lam == mu {
            return Ok(true);
        }
        // Necessary: mu - lambda in the positive root cone.
        if !strictly_above(&mu, &lam) {
            return Ok(false);
        }
        let mut seen: BTreeSet<AffineWeight> = BTreeSet::new();
        let mut queue: VecDeque<AffineWeight> = VecDeque::new();
        seen.insert(mu.clone());
        queue.push_back(mu);
        while let Some(x) = queue.pop_front() {
            for y in self.step_down(&x) {
                if y == lam {
                    return Ok(true);
                }
                // Prune branches that fell outside the cone over lambda.
                if y != lam && !strictly_above(&y, &lam) {
                    continue;
                }
                if seen.insert(y.clone()) {
                    if seen.len() > self.budget {
                        return Err(Error::BudgetExceeded(format!(
                            "linkage search exceeded {} nodes",
                            self.budget
                        )));
                    }
                    queue.push_back(y);
                }
            }
        }
        Ok(false)
    }
}

/// True when `gamma + rho-hat` lies in the closed antidominant region:
/// weakly increasing classical entries with spread at most `|kappa|`.
pub fn is_antidominant(gamma: &AffineWeight, kappa: Rat) -> bool {
    let m = gamma.rank();
    let rho = AffineWeight::rho_hat(m);
    let x = gamma.plus(&rho);
    for i in 1..m {
        if x.classical[i - 1] > x.classical[i] {
            return false;
        }
    }
    if m >= 2 {
        let spread = x.classical[m - 1] - x.classical[0];
        if spread + kappa > Rat::zero() {
            return false;
        }
    }
    true
}

/// Find the antidominant representative of the dot orbit of `lambda` and
/// the minimal-length `v` with `v . gamma = lambda` (minimal in its coset
/// modulo the stabilizer of `gamma`, so right descents never lie on the
/// walls through `gamma`).
///
/// Requires integral classical coordinates of `lambda + rho-hat` and an
/// integer `kappa < 0` (so the integral root system is the full affine
/// one); other regimes error `Unsupported`.
pub fn antidominant_rep(
    lam: &AffineWeight,
    kappa: Rat,
) -> Result<(AffineWeight, AffinePermutation)> {
    let m = lam.rank();
    if !is_integer(&kappa) || !kappa.is_negative() {
        return Err(Error::Unsupported(format!(
            "antidominant representative requires integer kappa < 0, got {}",
            crate::rat::format_rat(&kappa)
        )));
    }
    let expected_level = kappa - rat(m as i128);
    if lam.level != expected_level {
        return Err(Error::InvalidInput(format!(
            "weight level {} does not equal kappa - m = {}",
            crate::rat::format_rat(&lam.level),
            crate::rat::format_rat(&expected_level)
        )));
    }
    let lam = lam.tilde_normalized(kappa);
    let rho = AffineWeight::rho_hat(m);
    let mut x = lam.plus(&rho);
    if !x.classical_integral() {
        return Err(Error::Unsupported(
            "antidominant representative requires integral rho-shifted entries".into(),
        ));
    }
    let mut v = AffinePermutation::identity(m);
    if m >= 2 {
        let simple_pair = |x: &AffineWeight, i: usize| -> Rat {
            if i == 0 {
                x.classical[m - 1] - x.classical[0] + kappa
            } else {
                x.classical[i - 1] - x.classical[i]
            }
        };
        let mut steps = 0usize;
        loop {
            let mut moved = false;
            for i in 0..m {
                if simple_pair(&x, i).is_positive() {
                    let s = AffinePermutation::simple(i, m);
                    x = s.act(&x);
                    v = v.mul(&s);
                    moved = true;
                    steps += 1;
                    break;
                }
            }
            if !moved {
                break;
            }
            if steps > 1_000_000 {
                return Err(Error::Internal(
                    "antidominant walk failed to terminate".into(),
                ));
            }
        }
    }
    let gamma = x.minus(&rho);
    debug_assert!(is_antidominant(&gamma, kappa));
    // The walk can overshoot by a stabilizer element; strip right descents
    // lying on walls through gamma to reach the minimal coset representative.
    let stab: Vec<usize> = stabilizer_generators(&gamma, kappa);
    loop {
        let descent = stab.iter().copied().find(|&i| v.is_right_descent(i));
        match descent {
            Some(i) => v = v.mul(&AffinePermutation::simple(i, m)),
            None => break,
        }
    }
    debug_assert_eq!(v.dot(&gamma), lam);
    Ok((gamma, v))
}

/// Simple-generator indices stabilizing `gamma` under the dot action
/// (the walls of the antidominant region containing `gamma + rho-hat`).
pub fn stabilizer_generators(gamma: &AffineWeight, kappa: Rat) -> Vec<usize> {
    let m = gamma.rank();
    let rho = AffineWeight::rho_hat(m);
    let x = gamma.plus(&rho);
    let mut out = Vec::new();
    if m < 2 {
        return out;
    }
    if (x.classical[m - 1] - x.classical[0] + kappa).is_zero() {
        out.push(0);
    }
    for i in 1..m {
        if x.classical[i - 1] == x.classical[i] {
            out.push(i);
        }
    }
    out
}

/// Deterministic map key for weight deduplication across modules.
pub fn weight_sort_key(w: &AffineWeight) -> Vec<(i128, i128)> {
    let mut key = Vec::with_capacity(w.rank() + 2);
    key.push((*w.delta.numer(), *w.delta.denom()));
    for c in &w.classical {
        key.push((*c.numer(), *c.denom()));
    }
    key.push((*w.level.numer(), *w.level.denom()));
    key
}

/// Group weights by orbit-invariant data (level and classical sum);
/// weights in one dot orbit share a key.
pub fn orbit_invariant_key(w: &AffineWeight) -> (Rat, Rat) {
    let sum: Rat = w.classical.iter().copied().sum();
    (w.level, sum)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::ratio;
    use std::collections::BTreeMap;

    fn wt(classical: &[i64], level: i128) -> AffineWeight {
        AffineWeight::from_ints(classical, rat(level))
    }

    #[test]
    fn window_validation() {
        assert!(AffinePermutation::new(vec![3, 0]).is_ok());
        assert!(AffinePermutation::new(vec![2, 2]).is_err()); // repeated residue
        assert!(AffinePermutation::new(vec![2, 3]).is_err()); // offset sum not 0
        assert!(AffinePermutation::new(vec![]).is_err());
    }

    #[test]
    fn translation_window_has_length_two() {
        // [3, 0] is the translation by the simple root alpha_1 in rank 2.
        let w = AffinePermutation::new(vec![3, 0]).unwrap();
        assert_eq!(w.length(), 2);
        // And equals s_0 * s_1 (function composition).
        let s0 = AffinePermutation::simple(0, 2);
        let s1 = AffinePermutation::simple(1, 2);
        assert_eq!(s0.mul(&s1), w);
    }

    #[test]
    fn length_matches_word_search() {
        // BFS over all reduced words up to length 6 in affine rank 2 and 3:
        // the inversion formula must agree with graph distance from e.
        for m in [2usize, 3] {
            let mut dist: BTreeMap<AffinePermutation, usize> = BTreeMap::new();
            let mut frontier = vec![AffinePermutation::identity(m)];
            dist.insert(frontier[0].clone(), 0);
            for d in 1..=6usize {
                let mut next = Vec::new();
                for w in &frontier {
                    for i in 0..m {
                        let u = w.mul(&AffinePermutation::simple(i, m));
                        if !dist.contains_key(&u) {
                            dist.insert(u.clone(), d);
                            next.push(u);
                        }
                    }
                }
                frontier = next;
            }
            for (w, d) in dist {
                assert_eq!(w.length(), d, "window {w} in rank {m}");
            }
        }
    }

    #[test]
    fn reduced_word_round_trip() {
        for m in [2usize, 3, 4] {
            let mut w = AffinePermutation::identity(m);
            // A fixed scrambling word.
            for &i in &[0usize, 1, 0, 2 % m, 1, 0] {
                w = w.mul(&AffinePermutation::simple(i % m, m));
            }
            let word = w.reduced_word();
            assert_eq!(word.len(), w.length());
            assert_eq!(AffinePermutation::from_word(&word, m), w);
        }
    }

    #[test]
    fn inverse_and_descents() {
        let w = AffinePermutation::new(vec![3, 0]).unwrap();
        assert!(w.mul(&w.inverse()).is_identity());
        // w = s_0 s_1: right descent at 1, left descent at 0.
        assert!(w.is_right_descent(1));
        assert!(!w.is_right_descent(0));
        assert!(w.is_left_descent(0));
        assert!(!w.is_left_descent(1));
    }

    #[test]
    fn simple_reflection_acts_as_reflection() {
        // s_i action agrees with the root-reflection formula on weights.
        let m = 3;
        let x = AffineWeight::new(ratio(1, 2), vec![rat(5), rat(2), rat(-1)], rat(-2));
        for i in 1..m {
            let s = AffinePermutation::simple(i, m);
            let root = AffineRoot { a: i, b: i + 1, k: 0 };
            assert_eq!(s.act(&x), root.reflect(&x));
        }
        // s_0 corresponds to the root delta - eps_1 + eps_m, i.e.
        // eps_m - eps_1 + delta in our encoding.
        let s0 = AffinePermutation::simple(0, m);
        let root0 = AffineRoot { a: m, b: 1, k: 1 };
        assert_eq!(s0.act(&x), root0.reflect(&x));
    }

    #[test]
    fn action_is_a_group_action() {
        let m = 3;
        let x = AffineWeight::new(rat(2), vec![rat(4), rat(0), rat(-3)], rat(-2));
        let w1 = AffinePermutation::from_word(&[0, 2, 1, 0], m);
        let w2 = AffinePermutation::from_word(&[1, 0, 2], m);
        let lhs = w1.act(&w2.act(&x));
        let rhs = w1.mul(&w2).act(&x);
        assert_eq!(lhs, rhs);
        // Pairing invariance.
        let y = AffineWeight::new(rat(0), vec![rat(1), rat(1), rat(-2)], rat(3));
        assert_eq!(w1.act(&x).pairing(&w1.act(&y)), x.pairing(&y));
    }

    #[test]
    fn translation_on_omega0() {
        // Translation by alpha_1 applied linearly to omega_0 gives
        // alpha_1 + omega_0 - delta.
        let m = 3;
        let t = {
            // Window of t_{alpha_1}: i + m * tau_i with tau = (1,-1,0).
            AffinePermutation::new(vec![1 + 3, 2 - 3, 3]).unwrap()
        };
        let omega0 = AffineWeight::new(rat(0), vec![rat(0); m], rat(1));
        let img = t.act(&omega0);
        assert_eq!(
            img,
            AffineWeight::new(rat(-1), vec![rat(1), rat(-1), rat(0)], rat(1))
        );
    }

    #[test]
    fn dot_action_swaps_shifted_entries() {
        // s_1 dot-action swaps the first two entries of lambda + rho-hat.
        let m = 3;
        let lam = wt(&[-1, 0, 2], -5);
        let rho = AffineWeight::rho_hat(m);
        let x = lam.plus(&rho);
        let s1 = AffinePermutation::simple(1, m);
        let y = s1.dot(&lam).plus(&rho);
        assert_eq!(y.classical[0], x.classical[1]);
        assert_eq!(y.classical[1], x.classical[0]);
        assert_eq!(y.classical[2], x.classical[2]);
    }

    #[test]
    fn nu_project_examples() {
        // nu = (2), lambda + rho = (3,2): already dominant, sign +1.
        let nu = Composition::new(&[2]);
        let lam = wt(&[1, 1], -4);
        let (proj, sign) = nu_project(&lam, &nu).unwrap();
        assert_eq!(proj, lam);
        assert_eq!(sign, 1);
        // lambda + rho = (2,3): one swap, sign -1.
        let lam2 = wt(&[0, 2], -4);
        let (proj2, sign2) = nu_project(&lam2, &nu).unwrap();
        assert_eq!(proj2, lam);
        assert_eq!(sign2, -1);
        // lambda + rho = (2,2): not regular.
        let lam3 = wt(&[0, 1], -4);
        assert!(matches!(
            nu_project(&lam3, &nu),
            Err(Error::NotNuRegular(_))
        ));
    }

    #[test]
    fn positive_cone_membership() {
        // alpha_1 itself.
        let d = AffineWeight::from_ints(&[1, -1, 0], Rat::zero());
        assert!(in_positive_root_cone(&d));
        // Negative of a simple root requires one delta.
        let d2 = AffineWeight::new(rat(1), vec![rat(-1), rat(1), rat(0)], rat(0));
        assert!(in_positive_root_cone(&d2));
        let d2bad = AffineWeight::new(rat(0), vec![rat(-1), rat(1), rat(0)], rat(0));
        assert!(!in_positive_root_cone(&d2bad));
        // Two separate deficits repaired by one tall root: cost is the
        // peak increment sum. d = (-1,0,1): prefix sums -1,-1 -> cost 1.
        let d3 = AffineWeight::new(rat(1), vec![rat(-1), rat(0), rat(1)], rat(0));
        assert!(in_positive_root_cone(&d3));
        // d = (-1,1,-1,1): prefixes -1,0,-1 -> cost 2.
        let d4 = AffineWeight::new(rat(1), vec![rat(-1), rat(1), rat(-1), rat(1)], rat(0));
        assert!(!in_positive_root_cone(&d4));
        let d5 = AffineWeight::new(rat(2), vec![rat(-1), rat(1), rat(-1), rat(1)], rat(0));
        assert!(in_positive_root_cone(&d5));
        // Non-integral delta excluded.
        let d6 = AffineWeight::new(ratio(1, 2), vec![rat(0), rat(0)], rat(0));
        assert!(!in_positive_root_cone(&d6));
    }

    #[test]
    fn antidominant_walk_small() {
        // m=2, kappa=-2, nu=(1): lambda with lambda_pi + rho = (7,5).
        let kappa = rat(-2);
        let lam = wt(&[5, 4], -4); // classical lambda: +rho = (7,5)
        let (gamma, v) = antidominant_rep(&lam, kappa).unwrap();
        let rho = AffineWeight::rho_hat(2);
        let g = gamma.plus(&rho);
        assert_eq!(g.classical, vec![rat(5), rat(7)]);
        assert_eq!(v.length(), 1);
        assert_eq!(v, AffinePermutation::simple(1, 2));
        assert_eq!(v.dot(&gamma), lam.tilde_normalized(kappa));
    }

    #[test]
    fn antidominant_matches_exhaustive_search() {
        // Exhaustive orbit search up to bounded length agrees with the
        // walk on several weights.
        let m = 2;
        let kappa = rat(-2);
        for classical in [[5i64, 4], [6, 3], [2, 7], [4, 4]] {
            let lam = wt(&classical, -4).tilde_normalized(kappa);
            let (gamma, v) = antidominant_rep(&lam, kappa).unwrap();
            // Enumerate all elements of length <= v.length() + 2.
            let mut all = vec![AffinePermutation::identity(m)];
            let mut frontier = all.clone();
            for _ in 0..(v.length() + 2) {
                let mut next = Vec::new();
                for w in &frontier {
                    for i in 0..m {
                        let u = w.mul(&AffinePermutation::simple(i, m));
                        if !all.contains(&u) {
                            all.push(u.clone());
                            next.push(u);
                        }
                    }
                }
                frontier = next;
            }
            let mut best: Option<&AffinePermutation> = None;
            for w in &all {
                if w.dot(&gamma) == lam {
                    if best.map_or(true, |b| w.length() < b.length()) {
                        best = Some(w);
                    }
                }
            }
            let best = best.expect("orbit search must find a witness");
            assert_eq!(best.length(), v.length(), "lambda = {lam}");
            assert_eq!(best, &v, "minimal witness is unique");
            assert!(is_antidominant(&gamma, kappa));
        }
    }

    #[test]
    fn antidominant_rejects_bad_regimes() {
        let lam = wt(&[1, 0], -4);
        assert!(matches!(
            antidominant_rep(&lam, rat(2)),
            Err(Error::Unsupported(_))
        ));
        assert!(matches!(
            antidominant_rep(&lam, ratio(-5, 2)),
            Err(Error::Unsupported(_))
        ));
        let lam_bad_level = wt(&[1, 0], -7);
        assert!(matches!(
            antidominant_rep(&lam_bad_level, rat(-2)),
            Err(Error::InvalidInput(_))
        ));
    }

    #[test]
    fn stabilizer_generator_detection() {
        // gamma + rho = (9,9,10) at kappa=-1: walls at alpha_1 and alpha_0.
        let kappa = rat(-1);
        let m = 3;
        let rho = AffineWeight::rho_hat(m);
        let g = AffineWeight::new(
            AffineWeight::normalized_delta(&[rat(6), rat(7), rat(9)], kappa),
            vec![rat(6), rat(7), rat(9)],
            rat(-4),
        );
        let x = g.plus(&rho);
        assert_eq!(x.classical, vec![rat(9), rat(9), rat(10)]);
        assert_eq!(stabilizer_generators(&g, kappa), vec![0, 1]);
        assert!(is_antidominant(&g, kappa));
    }

    #[test]
    fn linkage_small_block() {
        // m=2, kappa=-2, nu=(2): labels (2,0) and (1,1) with pi = 0 and
        // rho-shifted weights (4,1), (3,2); the singular chain gives
        // (1,1) strictly below (2,0).
        let nu = Composition::new(&[2]);
        let ctx = LinkageContext::new(nu, KappaMode::Rational(rat(-2)));
        let hi = wt(&[2, 0], -4);
        let lo = wt(&[1, 1], -4);
        assert!(ctx.leq(&lo, &hi).unwrap());
        assert!(!ctx.leq(&hi, &lo).unwrap());
        assert!(ctx.leq(&hi, &hi).unwrap());
        let down = ctx.down_set(&hi).unwrap();
        assert_eq!(down.len(), 2);
    }

    #[test]
    fn linkage_rejects_non_dominant() {
        let nu = Composition::new(&[2]);
        let ctx = LinkageContext::new(nu, KappaMode::Rational(rat(-2)));
        let bad = wt(&[0, 2], -4);
        assert!(ctx.leq(&bad, &bad).is_err());
    }

    #[test]
    fn irrational_mode_only_finite_roots() {
        // With irrational kappa only k = 0 roots act; for nu = (1,1) and
        // weights differing by a classical root chain the order reduces
        // to finite dominance steps.
        let nu = Composition::new(&[1, 1]);
        let ctx = LinkageContext::new(nu, KappaMode::Irrational);
        let hi = wt(&[2, 0], 0);
        let lo = wt(&[0, 2], 0);
        // hi + rho = (4,1), reflection by eps_1 - eps_2 with pairing 3
        // gives (1,4), projected stays (1,4) (nu-blocks are singletons),
        // which is lo + rho = (2,3)? No: check concrete arithmetic.
        // (4,1) - 3*(1,-1) = (1,4); lam = (1-2, 4-1) = (-1,3).
        let target = wt(&[-1, 3], 0);
        assert!(ctx.leq(&target, &hi).unwrap());
        assert!(!ctx.leq(&lo, &hi).unwrap());
    }

    #[test]
    fn weight_display_and_key() {
        let x = AffineWeight::new(ratio(1, 2), vec![rat(3)], rat(-1));
        assert_eq!(format!("{x}"), "[delta=1/2; 3; level=-1]");
        assert_eq!(weight_sort_key(&x), vec![(1, 2), (3, 1), (-1, 1)]);
        assert_eq!(orbit_invariant_key(&x), (rat(-1), rat(3)));
    }
}
