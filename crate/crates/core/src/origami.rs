//! Square-tiled translation surfaces (origamis) as permutation pairs.
//!
//! An origami on n unit squares is a pair of permutations (r, u) of the
//! squares: r(i) is the square glued to the right of i, u(i) the square glued
//! on top. Squares are 0-indexed internally and 1-indexed in the text format.

use crate::exact::{rat_int, Rational};
use num_traits::Zero;
use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq, Clone)]
pub enum OrigamiError {
    #[error("malformed permutation: {0}")]
    MalformedPermutation(String),
    #[error("size mismatch: {0}")]
    SizeMismatch(String),
    #[error("operation requires a connected origami")]
    NotConnected,
    #[error("involution has a fixed point at square {0}")]
    NotFixedPointFree(usize),
    #[error("permutation does not commute with the gluings")]
    NotAutomorphism,
    #[error("quotient map is not an involution")]
    NotInvolution,
}

#[derive(Debug, Error, PartialEq, Eq, Clone)]
pub enum ProfileError {
    #[error("order sum {sum} does not give an integral genus for a {kind:?} profile")]
    NonIntegralGenus { sum: i64, kind: DifferentialKind },
    #[error("singularity order {0} not permitted (orders are >= -1 and nonzero)")]
    InvalidOrder(i64),
}

/// Permutation of {0, .., n-1} in one-line form.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm {
    map: Vec<usize>,
}

impl Perm {
    pub fn identity(n: usize) -> Perm {
        Perm {
            map: (0..n).collect(),
        }
    }

    /// Build from a one-line image vector; must be a bijection.
    pub fn from_images(map: Vec<usize>) -> Result<Perm, OrigamiError> {
        let n = map.len();
        let mut seen = vec![false; n];
        for &v in &map {
            if v >= n {
                return Err(OrigamiError::MalformedPermutation(format!(
                    "image {} out of range 1..{}",
                    v + 1,
                    n
                )));
            }
            if seen[v] {
                return Err(OrigamiError::MalformedPermutation(format!(
                    "image {} repeated",
                    v + 1
                )));
            }
            seen[v] = true;
        }
        Ok(Perm { map })
    }

    /// Build from disjoint cycles over 1..=n (1-indexed symbols, fixed points
    /// may be omitted). Repeated symbols are rejected.
    pub fn from_cycles(n: usize, cycles: &[Vec<usize>]) -> Result<Perm, OrigamiError> {
        let mut map: Vec<usize> = (0..n).collect();
        let mut used = vec![false; n];
        for cycle in cycles {
            for (k, &sym) in cycle.iter().enumerate() {
                if sym == 0 || sym > n {
                    return Err(OrigamiError::MalformedPermutation(format!(
                        "symbol {sym} outside 1..{n}"
                    )));
                }
                let i = sym - 1;
                if used[i] {
                    return Err(OrigamiError::MalformedPermutation(format!(
                        "symbol {sym} repeated across cycles"
                    )));
                }
                used[i] = true;
                let next = cycle[(k + 1) % cycle.len()];
                map[i] = next - 1;
            }
        }
        Perm::from_images(map)
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn apply(&self, i: usize) -> usize {
        self.map[i]
    }

    pub fn images(&self) -> &[usize] {
        &self.map
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0; self.map.len()];
        for (i, &v) in self.map.iter().enumerate() {
            inv[v] = i;
        }
        Perm { map: inv }
    }

    /// Function composition: (self * other)(x) = self(other(x)).
    pub fn compose(&self, other: &Perm) -> Perm {
        debug_assert_eq!(self.len(), other.len());
        Perm {
            map: other.map.iter().map(|&v| self.map[v]).collect(),
        }
    }

    /// Conjugation self -> pi self pi^{-1}.
    pub fn conjugate_by(&self, pi: &Perm) -> Perm {
        let mut map = vec![0; self.len()];
        for i in 0..self.len() {
            map[pi.apply(i)] = pi.apply(self.apply(i));
        }
        Perm { map }
    }

    pub fn is_identity(&self) -> bool {
        self.map.iter().enumerate().all(|(i, &v)| i == v)
    }

    pub fn is_involution(&self) -> bool {
        self.map.iter().enumerate().all(|(i, &v)| self.map[v] == i)
    }

    pub fn has_fixed_point(&self) -> Option<usize> {
        self.map.iter().enumerate().position(|(i, &v)| i == v)
    }

    /// Disjoint cycles (including fixed points), each rotated to start at its
    /// minimum, sorted by that minimum.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.map.len();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut cyc = vec![start];
            seen[start] = true;
            let mut cur = self.map[start];
            while cur != start {
                seen[cur] = true;
                cyc.push(cur);
                cur = self.map[cur];
            }
            out.push(cyc);
        }
        out
    }

    /// Cycle notation over 1-indexed symbols, fixed points omitted;
    /// `()` for the identity.
    pub fn cycle_string(&self) -> String {
        let mut s = String::new();
        for cyc in self.cycles() {
            if cyc.len() == 1 {
                continue;
            }
            s.push('(');
            for (k, &v) in cyc.iter().enumerate() {
                if k > 0 {
                    s.push(',');
                }
                s.push_str(&(v + 1).to_string());
            }
            s.push(')');
        }
        if s.is_empty() {
            s.push_str("()");
        }
        s
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.cycle_string())
    }
}

/// Which kind of differential a singularity profile belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DifferentialKind {
    Abelian,
    Quadratic,
}

/// Multiset of singularity orders d_j (>= -1, nonzero unless explicitly
/// flagged as marked points). Sorted descending.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SingularityProfile {
    orders: Vec<i64>,
}

impl SingularityProfile {
    pub fn new(mut orders: Vec<i64>) -> Result<SingularityProfile, ProfileError> {
        for &d in &orders {
            if d == 0 || d < -1 {
                return Err(ProfileError::InvalidOrder(d));
            }
        }
        orders.sort_unstable_by(|a, b| b.cmp(a));
        Ok(SingularityProfile { orders })
    }

    /// Allows order-0 entries (marked points); other constraints unchanged.
    pub fn with_marked(mut orders: Vec<i64>) -> Result<SingularityProfile, ProfileError> {
        for &d in &orders {
            if d < -1 {
                return Err(ProfileError::InvalidOrder(d));
            }
        }
        orders.sort_unstable_by(|a, b| b.cmp(a));
        Ok(SingularityProfile { orders })
    }

    pub fn empty() -> SingularityProfile {
        SingularityProfile { orders: vec![] }
    }

    pub fn orders(&self) -> &[i64] {
        &self.orders
    }

    pub fn len(&self) -> usize {
        self.orders.len()
    }

    pub fn is_empty(&self) -> bool {
        self.orders.is_empty()
    }

    pub fn sum(&self) -> i64 {
        self.orders.iter().sum()
    }

    /// Genus from the order sum: sum = 2g-2 (Abelian) or 4g-4 (quadratic).
    pub fn genus(&self, kind: DifferentialKind) -> Result<u64, ProfileError> {
        let s = self.sum();
        let (shift, div) = match kind {
            DifferentialKind::Abelian => (2, 2),
            DifferentialKind::Quadratic => (4, 4),
        };
        let t = s + shift;
        if t < 0 || t % div != 0 {
            return Err(ProfileError::NonIntegralGenus { sum: s, kind });
        }
        Ok((t / div) as u64)
    }

    /// `H(2^4)` / `Q(1^2,-1^2)` style label.
    pub fn label(&self, kind: DifferentialKind) -> String {
        let letter = match kind {
            DifferentialKind::Abelian => 'H',
            DifferentialKind::Quadratic => 'Q',
        };
        if self.orders.is_empty() {
            return format!("{letter}()");
        }
        let mut groups: Vec<(i64, usize)> = Vec::new();
        for &d in &self.orders {
            match groups.last_mut() {
                Some((v, c)) if *v == d => *c += 1,
                _ => groups.push((d, 1)),
            }
        }
        let body = groups
            .iter()
            .map(|(v, c)| {
                if *c == 1 {
                    v.to_string()
                } else {
                    format!("{v}^{c}")
                }
            })
            .collect::<Vec<_>>()
            .join(",");
        format!("{letter}({body})")
    }
}

impl fmt::Display for SingularityProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, d) in self.orders.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{d}")?;
        }
        write!(f, "}}")
    }
}

/// Horizontal cylinders of an origami: (width, height) pairs, with
/// sum(width * height) = number of squares.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CylinderDecomposition {
    cylinders: Vec<(usize, usize)>,
}

impl CylinderDecomposition {
    pub fn cylinders(&self) -> &[(usize, usize)] {
        &self.cylinders
    }

    pub fn total_area(&self) -> usize {
        self.cylinders.iter().map(|&(w, h)| w * h).sum()
    }

    /// Sum of height/width over all cylinders, exact.
    pub fn sum_height_over_width(&self) -> Rational {
        let mut acc = Rational::zero();
        for &(w, h) in &self.cylinders {
            acc += rat_int(h as i64) / rat_int(w as i64);
        }
        acc
    }
}

/// A validated origami. `r` and `u` always have equal length n >= 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Origami {
    r: Perm,
    u: Perm,
}

impl Origami {
    pub fn new(r: Perm, u: Perm) -> Result<Origami, OrigamiError> {
        if r.len() != u.len() {
            return Err(OrigamiError::SizeMismatch(format!(
                "r acts on {} squares, u on {}",
                r.len(),
                u.len()
            )));
        }
        if r.is_empty() {
            return Err(OrigamiError::SizeMismatch("no squares".into()));
        }
        Ok(Origami { r, u })
    }

    pub fn torus() -> Origami {
        Origami {
            r: Perm::identity(1),
            u: Perm::identity(1),
        }
    }

    pub fn n(&self) -> usize {
        self.r.len()
    }

    pub fn r(&self) -> &Perm {
        &self.r
    }

    pub fn u(&self) -> &Perm {
        &self.u
    }

    /// True iff the group generated by r and u acts transitively. Forward
    /// closure suffices: a finite forward-closed set is closed under the
    /// inverses as well.
    pub fn is_connected(&self) -> bool {
        let n = self.n();
        let mut seen = vec![false; n];
        let mut stack = vec![0usize];
        seen[0] = true;
        let mut count = 1;
        while let Some(i) = stack.pop() {
            for j in [self.r.apply(i), self.u.apply(i)] {
                if !seen[j] {
                    seen[j] = true;
                    count += 1;
                    stack.push(j);
                }
            }
        }
        count == n
    }

    /// Commutator r u r^{-1} u^{-1} (right-to-left application). Its cycles
    /// trace the squares around each vertex of the surface.
    pub fn commutator(&self) -> Perm {
        let rinv = self.r.inverse();
        let uinv = self.u.inverse();
        // c = r . u . r^{-1} . u^{-1}
        self.r.compose(&self.u).compose(&rinv).compose(&uinv)
    }

    /// Abelian singularity profile: a commutator cycle of length l is a cone
    /// point of angle 2 pi l, i.e. a zero of order l - 1; order 0 dropped.
    pub fn singularity_profile(&self) -> SingularityProfile {
        let orders: Vec<i64> = self
            .commutator()
            .cycles()
            .into_iter()
            .filter(|c| c.len() > 1)
            .map(|c| c.len() as i64 - 1)
            .collect();
        SingularityProfile::new(orders).expect("cycle lengths give valid orders")
    }

    /// Horizontal cylinder decomposition. Rows are cycles of r; the row of
    /// u(C) stacks rigidly on row C exactly when u(r(i)) = r(u(i)) for every
    /// i in C (no singularity on the circle between them); maximal stacks are
    /// the cylinders.
    pub fn horizontal_cylinders(&self) -> CylinderDecomposition {
        let n = self.n();
        let rows = self.r.cycles();
        let mut row_of = vec![0usize; n];
        for (id, row) in rows.iter().enumerate() {
            for &i in row {
                row_of[i] = id;
            }
        }
        let nrows = rows.len();
        // up[c] = row stacked directly above row c, if the gluing is rigid
        let mut up: Vec<Option<usize>> = vec![None; nrows];
        let mut has_below = vec![false; nrows];
        for (id, row) in rows.iter().enumerate() {
            let target = row_of[self.u.apply(row[0])];
            let rigid = row.iter().all(|&i| {
                row_of[self.u.apply(i)] == target
                    && self.u.apply(self.r.apply(i)) == self.r.apply(self.u.apply(i))
            });
            if rigid {
                up[id] = Some(target);
                has_below[target] = true;
            }
        }
        let mut seen = vec![false; nrows];
        let mut cylinders = Vec::new();
        // path components start at a row with nothing rigid below it
        for start in 0..nrows {
            if has_below[start] || seen[start] {
                continue;
            }
            let w = rows[start].len();
            let mut h = 0;
            let mut cur = Some(start);
            while let Some(c) = cur {
                seen[c] = true;
                h += 1;
                cur = up[c];
            }
            cylinders.push((w, h));
        }
        // remaining rows belong to cyclic stacks (torus-like pieces)
        for start in 0..nrows {
            if seen[start] {
                continue;
            }
            let w = rows[start].len();
            let mut h = 0;
            let mut c = start;
            loop {
                seen[c] = true;
                h += 1;
                c = up[c].expect("cyclic stack rows all have an up-neighbor");
                if c == start {
                    break;
                }
            }
            cylinders.push((w, h));
        }
        cylinders.sort_unstable_by(|a, b| b.cmp(a));
        CylinderDecomposition { cylinders }
    }

    /// All permutations commuting with both r and u (the translation group of
    /// the origami). Requires connectivity; the group then has order <= n.
    pub fn translation_automorphisms(&self) -> Result<Vec<Perm>, OrigamiError> {
        self.equivariant_maps(false)
    }

    /// All permutations conjugating r to r^{-1} and u to u^{-1}
    /// (-1 isometries). Possibly empty.
    pub fn antiautomorphisms(&self) -> Result<Vec<Perm>, OrigamiError> {
        self.equivariant_maps(true)
    }

    /// Maps sigma with sigma r = r' sigma and sigma u = u' sigma, where
    /// (r', u') is (r, u) or (r^{-1}, u^{-1}). On a connected origami such a
    /// map is determined by the image of square 0; try all n candidates.
    fn equivariant_maps(&self, invert: bool) -> Result<Vec<Perm>, OrigamiError> {
        if !self.is_connected() {
            return Err(OrigamiError::NotConnected);
        }
        let n = self.n();
        let (rr, uu) = if invert {
            (self.r.inverse(), self.u.inverse())
        } else {
            (self.r.clone(), self.u.clone())
        };
        let mut out = Vec::new();
        'candidates: for target in 0..n {
            let mut image = vec![usize::MAX; n];
            image[0] = target;
            let mut stack = vec![0usize];
            while let Some(i) = stack.pop() {
                let pairs = [
                    (self.r.apply(i), rr.apply(image[i])),
                    (self.u.apply(i), uu.apply(image[i])),
                ];
                for (src, dst) in pairs {
                    if image[src] == usize::MAX {
                        image[src] = dst;
                        stack.push(src);
                    } else if image[src] != dst {
                        continue 'candidates;
                    }
                }
            }
            // connected, so everything is assigned; check bijectivity
            if let Ok(p) = Perm::from_images(image) {
                // propagation fixed sigma(r(i)) and sigma(u(i)); verify the
                // defining relations globally
                let ok_r = p.compose(&self.r) == rr.compose(&p);
                let ok_u = p.compose(&self.u) == uu.compose(&p);
                if ok_r && ok_u {
                    out.push(p);
                }
            }
        }
        Ok(out)
    }

    /// Quotient by a fixed-point-free translation involution: squares become
    /// sigma-orbits, r and u descend.
    pub fn quotient_by_translation_involution(
        &self,
        sigma: &Perm,
    ) -> Result<Origami, OrigamiError> {
        if sigma.len() != self.n() {
            return Err(OrigamiError::SizeMismatch(
                "involution acts on a different square count".into(),
            ));
        }
        if !sigma.is_involution() {
            return Err(OrigamiError::NotInvolution);
        }
        if let Some(i) = sigma.has_fixed_point() {
            return Err(OrigamiError::NotFixedPointFree(i));
        }
        let commutes = sigma.compose(&self.r) == self.r.compose(sigma)
            && sigma.compose(&self.u) == self.u.compose(sigma);
        if !commutes {
            return Err(OrigamiError::NotAutomorphism);
        }
        let n = self.n();
        let mut class = vec![usize::MAX; n];
        let mut reps = Vec::new();
        for i in 0..n {
            if class[i] == usize::MAX {
                let j = sigma.apply(i);
                class[i] = reps.len();
                class[j] = reps.len();
                reps.push(i);
            }
        }
        let m = reps.len();
        let mut r2 = vec![0; m];
        let mut u2 = vec![0; m];
        for (k, &rep) in reps.iter().enumerate() {
            r2[k] = class[self.r.apply(rep)];
            u2[k] = class[self.u.apply(rep)];
        }
        Origami::new(Perm::from_images(r2)?, Perm::from_images(u2)?)
    }

    /// Relabel squares by pi: (r, u) -> (pi r pi^{-1}, pi u pi^{-1}).
    pub fn relabel(&self, pi: &Perm) -> Origami {
        Origami {
            r: self.r.conjugate_by(pi),
            u: self.u.conjugate_by(pi),
        }
    }
}

/// Parse the origami text format:
/// ```text
/// 14
/// r=(1,2,3,4,5,6,7)(8,9,10,11,12,13,14)
/// u=(1,3,13,8,2,14)(4,6,11,5,10,12)(7,9)
/// ```
/// One-line array form `r=[2,3,1]` (images of 1..n) is also accepted.
pub fn parse_origami(text: &str) -> Result<Origami, OrigamiError> {
    let mut lines = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'));
    let n_line = lines
        .next()
        .ok_or_else(|| OrigamiError::SizeMismatch("empty input".into()))?;
    let n: usize = n_line
        .parse()
        .map_err(|_| OrigamiError::SizeMismatch(format!("bad square count {n_line:?}")))?;
    if n == 0 {
        return Err(OrigamiError::SizeMismatch("square count must be >= 1".into()));
    }
    let mut r = None;
    let mut u = None;
    for line in lines {
        let (name, body) = line
            .split_once('=')
            .ok_or_else(|| OrigamiError::MalformedPermutation(format!("bad line {line:?}")))?;
        let p = parse_perm_body(n, body.trim())?;
        match name.trim() {
            "r" => r = Some(p),
            "u" => u = Some(p),
            other => {
                return Err(OrigamiError::MalformedPermutation(format!(
                    "unknown permutation name {other:?}"
                )))
            }
        }
    }
    match (r, u) {
        (Some(r), Some(u)) => Origami::new(r, u),
        _ => Err(OrigamiError::SizeMismatch("need both r= and u= lines".into())),
    }
}

/// Parse either `(a,b,c)(d,e)` cycles or `[x1,x2,...]` one-line images.
pub fn parse_perm_body(n: usize, body: &str) -> Result<Perm, OrigamiError> {
    if body.starts_with('[') {
        let inner = body
            .strip_prefix('[')
            .and_then(|s| s.strip_suffix(']'))
            .ok_or_else(|| OrigamiError::MalformedPermutation("unclosed array".into()))?;
        let images: Result<Vec<usize>, _> = inner
            .split(',')
            .map(|t| t.trim().parse::<usize>())
            .collect();
        let images =
            images.map_err(|_| OrigamiError::MalformedPermutation("bad array entry".into()))?;
        if images.len() != n {
            return Err(OrigamiError::SizeMismatch(format!(
                "array length {} but n = {n}",
                images.len()
            )));
        }
        for &v in &images {
            if v == 0 || v > n {
                return Err(OrigamiError::MalformedPermutation(format!(
                    "image {v} outside 1..{n}"
                )));
            }
        }
        Perm::from_images(images.into_iter().map(|v| v - 1).collect())
    } else {
        let mut cycles = Vec::new();
        let mut rest = body;
        while !rest.is_empty() {
            let open = rest
                .find('(')
                .ok_or_else(|| OrigamiError::MalformedPermutation("expected '('".into()))?;
            let close = rest
                .find(')')
                .ok_or_else(|| OrigamiError::MalformedPermutation("unclosed '('".into()))?;
            let inner = &rest[open + 1..close];
            if !inner.trim().is_empty() {
                let cyc: Result<Vec<usize>, _> = inner
                    .split(',')
                    .map(|t| t.trim().parse::<usize>())
                    .collect();
                let cyc = cyc
                    .map_err(|_| OrigamiError::MalformedPermutation("bad cycle entry".into()))?;
                cycles.push(cyc);
            }
            rest = rest[close + 1..].trim_start();
        }
        Perm::from_cycles(n, &cycles)
    }
}

/// Serialize to the text format.
pub fn format_origami(o: &Origami) -> String {
    format!("{}\nr={}\nu={}\n", o.n(), o.r().cycle_string(), o.u().cycle_string())
}

/// Multiplicity map of cylinder shapes, for order-insensitive comparison.
pub fn cylinder_multiset(c: &CylinderDecomposition) -> BTreeMap<(usize, usize), usize> {
    let mut m = BTreeMap::new();
    for &wh in c.cylinders() {
        *m.entry(wh).or_insert(0) += 1;
    }
    m
}
