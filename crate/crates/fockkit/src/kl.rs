//! Kazhdan–Lusztig polynomials by the defining recursion, with Bruhat
//! order, parabolic (signed) sums, a persistent polynomial cache, and
//! the block character matrices built from them.

use crate::affine::{
    antidominant_rep, stabilizer_generators, weight_sort_key, AffinePermutation, AffineWeight,
    KappaMode, LinkageContext,
};
use crate::combinatorics::Composition;
use crate::rat::Rat;
use crate::{Error, Result};
use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::RwLock;

/// Integer polynomial in `q`, ascending coefficients, no trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct IntPoly {
    coeffs: Vec<i64>,
}

impl IntPoly {
    pub fn zero() -> Self {
        IntPoly { coeffs: vec![] }
    }

    pub fn one() -> Self {
        IntPoly { coeffs: vec![1] }
    }

    pub fn from_coeffs(mut coeffs: Vec<i64>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        IntPoly { coeffs }
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, k: usize) -> i64 {
        self.coeffs.get(k).copied().unwrap_or(0)
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn add(&self, other: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = vec![0i64; n];
        for (i, c) in self.coeffs.iter().enumerate() {
            out[i] += c;
        }
        for (i, c) in other.coeffs.iter().enumerate() {
            out[i] += c;
        }
        IntPoly::from_coeffs(out)
    }

    pub fn sub(&self, other: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = vec![0i64; n];
        for (i, c) in self.coeffs.iter().enumerate() {
            out[i] += c;
        }
        for (i, c) in other.coeffs.iter().enumerate() {
            out[i] -= c;
        }
        IntPoly::from_coeffs(out)
    }

    pub fn scale(&self, c: i64) -> IntPoly {
        IntPoly::from_coeffs(self.coeffs.iter().map(|a| a * c).collect())
    }

    /// Multiply by `q^k`.
    pub fn shift(&self, k: usize) -> IntPoly {
        if self.is_zero() {
            return IntPoly::zero();
        }
        let mut out = vec![0i64; k + self.coeffs.len()];
        out[k..].copy_from_slice(&self.coeffs);
        IntPoly { coeffs: out }
    }

    pub fn eval_at_one(&self) -> i64 {
        self.coeffs.iter().sum()
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, &c) in self.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            if first {
                if c < 0 {
                    write!(f, "-")?;
                }
            } else if c < 0 {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let a = c.abs();
            match k {
                0 => write!(f, "{a}")?,
                _ => {
                    if a != 1 {
                        write!(f, "{a}")?;
                    }
                    if k == 1 {
                        write!(f, "q")?;
                    } else {
                        write!(f, "q^{k}")?;
                    }
                }
            }
            first = false;
        }
        Ok(())
    }
}

/// Which Coxeter group the engine works in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GroupKind {
    /// Symmetric group on `m` letters (generators `1..m-1`).
    Finite,
    /// Affine symmetric group (generators `0..m-1`).
    Affine,
}

impl GroupKind {
    fn tag(self) -> &'static str {
        match self {
            GroupKind::Finite => "finite",
            GroupKind::Affine => "affine",
        }
    }

    fn from_tag(s: &str) -> Option<GroupKind> {
        match s {
            "finite" => Some(GroupKind::Finite),
            "affine" => Some(GroupKind::Affine),
            _ => None,
        }
    }
}

type ElemPair = (AffinePermutation, AffinePermutation);

/// Memoized Kazhdan–Lusztig engine for one group.
pub struct KlEngine {
    kind: GroupKind,
    m: usize,
    kl: RwLock<HashMap<ElemPair, IntPoly>>,
    bruhat: RwLock<HashMap<ElemPair, bool>>,
    intervals: RwLock<HashMap<AffinePermutation, Vec<AffinePermutation>>>,
    cache_path: Option<PathBuf>,
}

impl KlEngine {
    pub fn new(kind: GroupKind, m: usize) -> Self {
        assert!(m >= 2, "engine needs rank at least 2");
        KlEngine {
            kind,
            m,
            kl: RwLock::new(HashMap::new()),
            bruhat: RwLock::new(HashMap::new()),
            intervals: RwLock::new(HashMap::new()),
            cache_path: None,
        }
    }

    /// Engine with a persistent polynomial cache file; loads any
    /// existing entries for this group (other lines are ignored).
    pub fn with_cache(kind: GroupKind, m: usize, path: &Path) -> Result<Self> {
        let mut engine = KlEngine::new(kind, m);
        engine.cache_path = Some(path.to_path_buf());
        if path.exists() {
            let text = fs::read_to_string(path)
                .map_err(|e| Error::InvalidInput(format!("cannot read cache {path:?}: {e}")))?;
            engine.load_cache_lines(&text);
        }
        Ok(engine)
    }

    pub fn kind(&self) -> GroupKind {
        self.kind
    }

    pub fn rank(&self) -> usize {
        self.m
    }

    /// Number of memoized polynomials (loaded plus computed).
    pub fn cached_polynomials(&self) -> usize {
        self.kl.read().unwrap().len()
    }

    fn gens(&self) -> std::ops::Range<usize> {
        match self.kind {
            GroupKind::Finite => 1..self.m,
            GroupKind::Affine => 0..self.m,
        }
    }

    fn check_element(&self, w: &AffinePermutation) -> Result<()> {
        if w.rank() != self.m {
            return Err(Error::InvalidInput(format!(
                "element {w} has rank {}, engine expects {}",
                w.rank(),
                self.m
            )));
        }
        if self.kind == GroupKind::Finite && !w.is_finite() {
            return Err(Error::InvalidInput(format!(
                "element {w} is not a finite permutation"
            )));
        }
        Ok(())
    }

    // ---- cache ----------------------------------------------------

    fn word_token(w: &AffinePermutation) -> String {
        let word = w.reduced_word();
        if word.is_empty() {
            "e".to_string()
        } else {
            word.iter()
                .map(|i| i.to_string())
                .collect::<Vec<_>>()
                .join(".")
        }
    }

    fn parse_word_token(tok: &str, m: usize) -> Option<AffinePermutation> {
        if tok == "e" {
            return Some(AffinePermutation::identity(m));
        }
        let mut word = Vec::new();
        for part in tok.split('.') {
            let i: usize = part.parse().ok()?;
            if i >= m {
                return None;
            }
            word.push(i);
        }
        Some(AffinePermutation::from_word(&word, m))
    }

    /// Parse cache lines, inserting entries that match this engine's
    /// group; malformed or foreign lines are skipped (the cache is
    /// advisory, never authoritative).
    fn load_cache_lines(&self, text: &str) {
        let mut memo = self.kl.write().unwrap();
        for line in text.lines() {
            let parts: Vec<&str> = line.split_whitespace().collect();
            if parts.len() != 6 || parts[0] != "klv1" {
                continue;
            }
            let kind = match GroupKind::from_tag(parts[1]) {
                Some(k) => k,
                None => continue,
            };
            let m: usize = match parts[2].parse() {
                Ok(v) => v,
                Err(_) => continue,
            };
            if kind != self.kind || m != self.m {
                continue;
            }
            let v = match Self::parse_word_token(parts[3], m) {
                Some(v) => v,
                None => continue,
            };
            let w = match Self::parse_word_token(parts[4], m) {
                Some(w) => w,
                None => continue,
            };
            let coeffs: Option<Vec<i64>> = parts[5]
                .split(',')
                .map(|c| c.parse::<i64>().ok())
                .collect();
            let coeffs = match coeffs {
                Some(c) => c,
                None => continue,
            };
            memo.insert((v, w), IntPoly::from_coeffs(coeffs));
        }
    }

    /// Write all memoized polynomials to the cache file (no-op without
    /// a configured path). Lines are sorted for reproducible output.
    pub fn save_cache(&self) -> Result<()> {
        let path = match &self.cache_path {
            Some(p) => p.clone(),
            None => return Ok(()),
        };
        let memo = self.kl.read().unwrap();
        let mut lines: Vec<String> = memo
            .iter()
            .filter(|(_, p)| !p.is_zero())
            .map(|((v, w), p)| {
                let coeffs = p
                    .coeffs()
                    .iter()
                    .map(|c| c.to_string())
                    .collect::<Vec<_>>()
                    .join(",");
                format!(
                    "klv1 {} {} {} {} {}",
                    self.kind.tag(),
                    self.m,
                    Self::word_token(v),
                    Self::word_token(w),
                    coeffs
                )
            })
            .collect();
        lines.sort();
        lines.dedup();
        let mut text = lines.join("\n");
        text.push('\n');
        fs::write(&path, text)
            .map_err(|e| Error::InvalidInput(format!("cannot write cache {path:?}: {e}")))
    }

    // ---- Bruhat order ----------------------------------------------

    /// Bruhat order test, by induction on descents: for `ws < w`,
    /// `v <= w` iff (`vs <= ws` when `vs < v`, else `v <= ws`).
    pub fn bruhat_leq(&self, v: &AffinePermutation, w: &AffinePermutation) -> bool {
        if v == w || v.is_identity() {
            return true;
        }
        if v.length() >= w.length() {
            return false;
        }
        let key = (v.clone(), w.clone());
        if let Some(&b) = self.bruhat.read().unwrap().get(&key) {
            return b;
        }
        let i = self
            .gens()
            .find(|&i| w.is_right_descent(i))
            .expect("non-identity element has a right descent");
        let s = AffinePermutation::simple(i, self.m);
        let ws = w.mul(&s);
        let vs = v.mul(&s);
        let ans = if vs.length() < v.length() {
            self.bruhat_leq(&vs, &ws)
        } else {
            self.bruhat_leq(v, &ws)
        };
        self.bruhat.write().unwrap().insert(key, ans);
        ans
    }

    /// Elements covered by `w` (length `l(w) - 1` in Bruhat order),
    /// from single letter deletions in a reduced word.
    pub fn covers_down(&self, w: &AffinePermutation) -> Vec<AffinePermutation> {
        let word = w.reduced_word();
        let target = word.len().saturating_sub(1);
        let mut out = BTreeSet::new();
        for skip in 0..word.len() {
            let sub: Vec<usize> = word
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != skip)
                .map(|(_, &g)| g)
                .collect();
            let u = AffinePermutation::from_word(&sub, self.m);
            if u.length() == target {
                out.insert(u);
            }
        }
        out.into_iter().collect()
    }

    /// The full Bruhat lower interval `{v : v <= w}`, memoized, sorted
    /// by `(length, window)`.
    pub fn lower_interval(&self, w: &AffinePermutation) -> Vec<AffinePermutation> {
        if let Some(cached) = self.intervals.read().unwrap().get(w) {
            return cached.clone();
        }
        let set = self.interval_closure(w, 0);
        let mut out: Vec<AffinePermutation> = set.into_iter().collect();
        out.sort_by_key(|u| (u.length(), u.window().to_vec()));
        self.intervals
            .write()
            .unwrap()
            .insert(w.clone(), out.clone());
        out
    }

    /// Lower interval truncated at a minimum length (not memoized).
    fn interval_closure(&self, w: &AffinePermutation, min_len: usize) -> BTreeSet<AffinePermutation> {
        let mut seen = BTreeSet::new();
        let mut queue = VecDeque::new();
        seen.insert(w.clone());
        queue.push_back(w.clone());
        while let Some(u) = queue.pop_front() {
            if u.length() <= min_len {
                continue;
            }
            for c in self.covers_down(&u) {
                if c.length() >= min_len && seen.insert(c.clone()) {
                    queue.push_back(c);
                }
            }
        }
        seen
    }

    // ---- Kazhdan-Lusztig recursion ---------------------------------

    /// The polynomial `P_{x,w}` (zero unless `x <= w`).
    pub fn kl_poly(&self, x: &AffinePermutation, w: &AffinePermutation) -> Result<IntPoly> {
        self.check_element(x)?;
        self.check_element(w)?;
        Ok(self.kl_inner(x, w))
    }

    fn kl_inner(&self, x: &AffinePermutation, w: &AffinePermutation) -> IntPoly {
        if x == w {
            return IntPoly::one();
        }
        if x.length() >= w.length() || !self.bruhat_leq(x, w) {
            return IntPoly::zero();
        }
        let key = (x.clone(), w.clone());
        if let Some(p) = self.kl.read().unwrap().get(&key) {
            return p.clone();
        }
        // Raise x through left ascents that descend w: P_{x,w} = P_{sx,w}.
        let i = self
            .gens()
            .find(|&i| w.is_left_descent(i))
            .expect("non-identity element has a left descent");
        let s = AffinePermutation::simple(i, self.m);
        let sx = s.mul(x);
        let p = if sx.length() > x.length() {
            self.kl_inner(&sx, w)
        } else {
            // sx < x: full recursion step on sw.
            let sw = s.mul(w);
            let mut p = self
                .kl_inner(&sx, &sw)
                .add(&self.kl_inner(x, &sw).shift(1));
            // Correction sum over z <= sw with sz < z and x <= z.
            for z in self.interval_closure(&sw, x.length()) {
                if z == sw {
                    continue;
                }
                let gap = w.length() - z.length();
                if gap % 2 != 0 {
                    continue;
                }
                let sz = s.mul(&z);
                if sz.length() >= z.length() {
                    continue;
                }
                if !self.bruhat_leq(x, &z) {
                    continue;
                }
                let mu = self.mu_inner(&z, &sw);
                if mu == 0 {
                    continue;
                }
                let term = self.kl_inner(x, &z).scale(mu).shift(gap / 2);
                p = p.sub(&term);
            }
            p
        };
        self.kl.write().unwrap().insert(key, p.clone());
        p
    }

    /// The coefficient `mu(z, u)` of `q^{(l(u)-l(z)-1)/2}` in `P_{z,u}`.
    pub fn mu(&self, z: &AffinePermutation, u: &AffinePermutation) -> Result<i64> {
        self.check_element(z)?;
        self.check_element(u)?;
        Ok(self.mu_inner(z, u))
    }

    fn mu_inner(&self, z: &AffinePermutation, u: &AffinePermutation) -> i64 {
        if z.length() >= u.length() {
            return 0;
        }
        let gap = u.length() - z.length();
        if gap % 2 == 0 {
            return 0;
        }
        self.kl_inner(z, u).coeff((gap - 1) / 2)
    }

    // ---- parabolic sums --------------------------------------------

    /// Elements of the standard parabolic subgroup generated by `j_set`
    /// with length at most `max_len`, sorted by `(length, window)`.
    pub fn parabolic_elements_bounded(
        &self,
        j_set: &BTreeSet<usize>,
        max_len: usize,
    ) -> Vec<AffinePermutation> {
        let mut seen = BTreeSet::new();
        let mut queue = VecDeque::new();
        let e = AffinePermutation::identity(self.m);
        seen.insert(e.clone());
        queue.push_back(e);
        while let Some(u) = queue.pop_front() {
            if u.length() == max_len {
                continue;
            }
            for &i in j_set {
                let us = u.mul(&AffinePermutation::simple(i, self.m));
                if us.length() > u.length() && seen.insert(us.clone()) {
                    queue.push_back(us);
                }
            }
        }
        let mut out: Vec<AffinePermutation> = seen.into_iter().collect();
        out.sort_by_key(|u| (u.length(), u.window().to_vec()));
        out
    }

    /// True when `w` has no right descent inside `j_set` (is the
    /// minimal-length representative of `w W_J`).
    pub fn is_minimal_coset_rep(&self, w: &AffinePermutation, j_set: &BTreeSet<usize>) -> bool {
        j_set.iter().all(|&i| !w.is_right_descent(i))
    }

    /// Signed parabolic polynomial
    /// `sum_{x in W_J} (-1)^{l(x)} P_{u x, w}` for minimal coset
    /// representatives `u, w` of `W / W_J`.
    pub fn parabolic_kl_minus(
        &self,
        j_set: &BTreeSet<usize>,
        u: &AffinePermutation,
        w: &AffinePermutation,
    ) -> Result<IntPoly> {
        self.check_element(u)?;
        self.check_element(w)?;
        for &i in j_set {
            if !self.gens().contains(&i) {
                return Err(Error::InvalidInput(format!(
                    "generator {i} outside the engine's index set"
                )));
            }
        }
        if !self.is_minimal_coset_rep(u, j_set) || !self.is_minimal_coset_rep(w, j_set) {
            return Err(Error::NotMinimalCosetRep(format!(
                "{u} or {w} has a right descent in {j_set:?}"
            )));
        }
        if u.length() > w.length() {
            return Ok(IntPoly::zero());
        }
        // l(ux) = l(u) + l(x) for minimal u, so P_{ux,w} needs
        // l(x) <= l(w) - l(u).
        let bound = w.length() - u.length();
        let mut acc = IntPoly::zero();
        for x in self.parabolic_elements_bounded(j_set, bound) {
            let ux = u.mul(&x);
            debug_assert_eq!(ux.length(), u.length() + x.length());
            let p = self.kl_inner(&ux, w);
            if p.is_zero() {
                continue;
            }
            let sign = if x.length() % 2 == 0 { 1 } else { -1 };
            acc = acc.add(&p.scale(sign));
        }
        Ok(acc)
    }
}

/// Character matrix of a union of linkage-closed blocks: the saturated
/// label set, the minimal-length representatives, the signed parabolic
/// evaluations, and the inverse (multiplicity) matrix.
pub struct CharacterMatrix {
    /// Saturated label weights, sorted by (representative length, weight).
    pub labels: Vec<AffineWeight>,
    /// Minimal-length `v` with `v . gamma = label`, per label.
    pub reps: Vec<AffinePermutation>,
    /// Antidominant orbit representative per label.
    pub gammas: Vec<AffineWeight>,
    /// `simple_in_standard[i][j]`: coefficient of the `j`-th standard
    /// character in the `i`-th simple character (unitriangular, signs).
    pub simple_in_standard: Vec<Vec<i64>>,
    /// `multiplicity[i][j] = [standard_i : simple_j]`, the inverse.
    pub multiplicity: Vec<Vec<i64>>,
}

impl CharacterMatrix {
    pub fn index_of(&self, w: &AffineWeight) -> Option<usize> {
        self.labels.iter().position(|x| x == w)
    }
}

/// Build the character matrix for the blocks containing `targets`.
///
/// Labels are the union of the linkage down-sets of the targets (so the
/// matrix is closed under the order that controls multiplicities), with
/// weights from distinct blocks simply occupying disjoint diagonal
/// parts. The engine must be affine of rank `|nu|`.
pub fn character_matrix(
    engine: &KlEngine,
    nu: &Composition,
    kappa: Rat,
    targets: &[AffineWeight],
    budget: usize,
) -> Result<CharacterMatrix> {
    if engine.kind() != GroupKind::Affine || engine.rank() != nu.total() as usize {
        return Err(Error::InvalidInput(
            "character matrix needs an affine engine of rank |nu|".into(),
        ));
    }
    if targets.is_empty() {
        return Err(Error::InvalidInput("no target weights".into()));
    }
    let mut ctx = LinkageContext::new(nu.clone(), KappaMode::Rational(kappa));
    ctx.budget = budget;
    let mut label_set: BTreeSet<AffineWeight> = BTreeSet::new();
    for t in targets {
        for w in ctx.down_set(t)? {
            label_set.insert(w);
        }
    }
    // Antidominant data per label.
    let mut entries: Vec<(AffineWeight, AffinePermutation, AffineWeight)> = Vec::new();
    for lam in label_set {
        let (gamma, v) = antidominant_rep(&lam, kappa)?;
        entries.push((lam, v, gamma));
    }
    entries.sort_by_key(|(lam, v, _)| (v.length(), weight_sort_key(lam)));
    let n = entries.len();
    // Per-block stabilizer generator sets.
    let mut j_sets: BTreeMap<Vec<(i128, i128)>, BTreeSet<usize>> = BTreeMap::new();
    for (_, _, gamma) in &entries {
        j_sets
            .entry(weight_sort_key(gamma))
            .or_insert_with(|| stabilizer_generators(gamma, kappa).into_iter().collect());
    }
    let mut d = vec![vec![0i64; n]; n];
    for i in 0..n {
        let (_, vi, gi) = &entries[i];
        let j_set = &j_sets[&weight_sort_key(gi)];
        if !engine.is_minimal_coset_rep(vi, j_set) {
            return Err(Error::Internal(format!(
                "walk produced a non-minimal representative {vi}"
            )));
        }
        for j in 0..=i {
            let (_, vj, gj) = &entries[j];
            if gj != gi {
                continue;
            }
            if !engine.bruhat_leq(vj, vi) {
                continue;
            }
            let p = engine.parabolic_kl_minus(j_set, vj, vi)?;
            let sign = if (vi.length() - vj.length()) % 2 == 0 {
                1
            } else {
                -1
            };
            d[i][j] = sign * p.eval_at_one();
        }
    }
    for (i, row) in d.iter().enumerate() {
        if row[i] != 1 {
            return Err(Error::Internal(
                "character matrix is not unitriangular".into(),
            ));
        }
    }
    // Invert the lower unitriangular matrix over the integers.
    let mut inv = vec![vec![0i64; n]; n];
    for i in 0..n {
        inv[i][i] = 1;
        for j in (0..i).rev() {
            let mut acc = 0i64;
            for k in j..i {
                acc += d[i][k] * inv[k][j];
            }
            inv[i][j] = -acc;
        }
    }
    let labels = entries.iter().map(|(l, _, _)| l.clone()).collect();
    let reps = entries.iter().map(|(_, v, _)| v.clone()).collect();
    let gammas = entries.iter().map(|(_, _, g)| g.clone()).collect();
    Ok(CharacterMatrix {
        labels,
        reps,
        gammas,
        simple_in_standard: d,
        multiplicity: inv,
    })
}
