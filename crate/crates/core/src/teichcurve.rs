//! SL(2,Z) action on origamis, orbit enumeration with canonical-form
//! deduplication, and the exact sum of Lyapunov exponents of the resulting
//! arithmetic Teichmueller curve.

use crate::exact::{rat_int, rational_string, Rational};
use crate::origami::{
    DifferentialKind, Origami, OrigamiError, Perm, ProfileError, SingularityProfile,
};
use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;
use std::collections::HashSet;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum TeichError {
    #[error("orbit budget of {budget} surfaces exceeded")]
    OrbitBudgetExceeded { budget: usize },
    #[error(transparent)]
    Origami(#[from] OrigamiError),
    #[error(transparent)]
    Profile(#[from] ProfileError),
    #[error("the halving identity requires the quadratic profile to have genus 1, got {0}")]
    GenusPlusNotOne(u64),
    #[error("ramification locus must contain an even number of points, got {0}")]
    OddRamification(usize),
}

/// Default cap on orbit enumeration. Exceeding the cap is an error, never a
/// silent truncation: Lyapunov sums over partial orbits are meaningless.
pub const DEFAULT_ORBIT_BUDGET: usize = 1_000_000;

/// Horizontal shear: fixes r, twists u along its row.
pub fn act_t(o: &Origami) -> Origami {
    let u2 = o.u().compose(&o.r().inverse());
    Origami::new(o.r().clone(), u2).expect("shear preserves validity")
}

/// Quarter turn: exchanges horizontal and vertical structure.
pub fn act_s(o: &Origami) -> Origami {
    Origami::new(o.u().clone(), o.r().inverse()).expect("rotation preserves validity")
}

/// Lexicographically minimal relabeling of (r, u), found by breadth-first
/// relabeling anchored at every starting square. Requires connectivity.
pub fn canonical_form(o: &Origami) -> Result<Origami, OrigamiError> {
    let n = o.n();
    let r = o.r().images();
    let u = o.u().images();
    let mut best: Option<(Vec<usize>, Vec<usize>)> = None;
    let mut label = vec![usize::MAX; n];
    let mut order: Vec<usize> = Vec::with_capacity(n);
    for start in 0..n {
        label.iter_mut().for_each(|v| *v = usize::MAX);
        order.clear();
        label[start] = 0;
        order.push(start);
        let mut head = 0;
        while head < order.len() {
            let cur = order[head];
            head += 1;
            for next in [r[cur], u[cur]] {
                if label[next] == usize::MAX {
                    label[next] = order.len();
                    order.push(next);
                }
            }
        }
        if order.len() != n {
            return Err(OrigamiError::NotConnected);
        }
        let mut r2 = vec![0usize; n];
        let mut u2 = vec![0usize; n];
        for i in 0..n {
            r2[label[i]] = label[r[i]];
            u2[label[i]] = label[u[i]];
        }
        let cand = (r2, u2);
        if best.as_ref().map_or(true, |b| cand < *b) {
            best = Some(cand);
        }
    }
    let (r2, u2) = best.expect("n >= 1");
    Ok(Origami::new(Perm::from_images(r2)?, Perm::from_images(u2)?)
        .expect("relabeling preserves validity"))
}

/// Compact encoding of a canonical origami: r images then u images, one u16
/// per square.
fn encode(o: &Origami) -> Box<[u16]> {
    let n = o.n();
    let mut v = Vec::with_capacity(2 * n);
    v.extend(o.r().images().iter().map(|&x| x as u16));
    v.extend(o.u().images().iter().map(|&x| x as u16));
    v.into_boxed_slice()
}

fn decode(buf: &[u16]) -> Origami {
    let n = buf.len() / 2;
    let r = Perm::from_images(buf[..n].iter().map(|&x| x as usize).collect()).unwrap();
    let u = Perm::from_images(buf[n..].iter().map(|&x| x as usize).collect()).unwrap();
    Origami::new(r, u).unwrap()
}

/// A complete SL(2,Z) orbit: canonical representatives, shared singularity
/// profile, and the horizontal-cylinder sum of each member.
#[derive(Debug, Clone)]
pub struct OrbitData {
    representatives: Vec<Box<[u16]>>,
    profile: SingularityProfile,
    cylinder_sums: Vec<Rational>,
    n: usize,
}

impl OrbitData {
    pub fn size(&self) -> usize {
        self.representatives.len()
    }

    pub fn squares(&self) -> usize {
        self.n
    }

    pub fn profile(&self) -> &SingularityProfile {
        &self.profile
    }

    pub fn cylinder_sums(&self) -> &[Rational] {
        &self.cylinder_sums
    }

    pub fn representative(&self, i: usize) -> Origami {
        decode(&self.representatives[i])
    }

    pub fn representatives(&self) -> impl Iterator<Item = Origami> + '_ {
        self.representatives.iter().map(|b| decode(b))
    }

    pub fn mean_cylinder_sum(&self) -> Rational {
        let total: Rational = self.cylinder_sums.iter().cloned().sum();
        total / rat_int(self.size() as i64)
    }

    pub fn contains(&self, o: &Origami) -> Result<bool, OrigamiError> {
        let c = encode(&canonical_form(o)?);
        Ok(self.representatives.contains(&c))
    }
}

/// Breadth-first closure of an origami under the shear and quarter-turn
/// generators, deduplicated by canonical form. Frontier surfaces are analyzed
/// in parallel; insertion order is deterministic.
pub fn orbit(seed: &Origami, budget: usize) -> Result<OrbitData, TeichError> {
    if !seed.is_connected() {
        return Err(TeichError::Origami(OrigamiError::NotConnected));
    }
    let profile = seed.singularity_profile();
    let canon = canonical_form(seed)?;
    let mut visited: HashSet<Box<[u16]>> = HashSet::new();
    let mut reps: Vec<Box<[u16]>> = Vec::new();
    let mut sums: Vec<Rational> = Vec::new();
    let first = encode(&canon);
    visited.insert(first.clone());
    reps.push(first);
    sums.push(canon.horizontal_cylinders().sum_height_over_width());
    let mut frontier: Vec<Box<[u16]>> = vec![encode(&canon)];
    while !frontier.is_empty() {
        // canonical images of both generators, computed in parallel
        let produced: Vec<(Box<[u16]>, Rational, SingularityProfile)> = frontier
            .par_iter()
            .flat_map_iter(|buf| {
                let o = decode(buf);
                [act_t(&o), act_s(&o)].into_iter().map(|img| {
                    let c = canonical_form(&img).expect("orbit members stay connected");
                    let sum = c.horizontal_cylinders().sum_height_over_width();
                    let prof = c.singularity_profile();
                    (encode(&c), sum, prof)
                })
            })
            .collect();
        let mut next = Vec::new();
        for (buf, sum, prof) in produced {
            if visited.contains(&buf) {
                continue;
            }
            if reps.len() >= budget {
                return Err(TeichError::OrbitBudgetExceeded { budget });
            }
            debug_assert_eq!(prof, profile, "stratum must be constant along the orbit");
            visited.insert(buf.clone());
            reps.push(buf.clone());
            sums.push(sum);
            next.push(buf);
        }
        frontier = next;
    }
    Ok(OrbitData {
        representatives: reps,
        profile,
        cylinder_sums: sums,
        n: seed.n(),
    })
}

/// Sum of the Lyapunov exponents lambda_1 + ... + lambda_g of the arithmetic
/// Teichmueller curve of an orbit of square-tiled surfaces:
/// (1/12) sum d_i(d_i+2)/(d_i+1) over the Abelian profile, plus the orbit
/// average of the horizontal cylinder sums sum h/w.
#[derive(Debug, Clone)]
pub struct LyapunovSumReport {
    pub kappa_abelian: Rational,
    pub mean_cylinder_sum: Rational,
    pub total: Rational,
}

pub fn kappa_abelian(profile: &SingularityProfile) -> Rational {
    let mut acc = Rational::zero();
    for &d in profile.orders() {
        acc += rat_int(d * (d + 2)) / rat_int(d + 1);
    }
    acc / rat_int(12)
}

pub fn sum_lyapunov(orbit: &OrbitData, profile: &SingularityProfile) -> LyapunovSumReport {
    let kappa = kappa_abelian(profile);
    let mean = orbit.mean_cylinder_sum();
    let total = &kappa + &mean;
    LyapunovSumReport {
        kappa_abelian: kappa,
        mean_cylinder_sum: mean,
        total,
    }
}

/// (sum lambda^-) - (sum lambda^+) for the orienting double cover of a
/// quadratic profile: (1/4) sum 1/(d_j + 2) over the odd-order singularities.
pub fn deficit(quadratic: &SingularityProfile) -> Rational {
    let mut acc = Rational::zero();
    for &d in quadratic.orders() {
        if d % 2 != 0 {
            acc += rat_int(1) / rat_int(d + 2);
        }
    }
    acc / rat_int(4)
}

/// Extract lambda_1^+ from the exponent sum of the orienting double cover,
/// valid when the quadratic profile has genus 1 (single positive exponent):
/// lambda_1^+ = (total - deficit)/2.
pub fn lambda_plus_from_cover(
    total: &Rational,
    quadratic: &SingularityProfile,
) -> Result<Rational, TeichError> {
    let g = quadratic.genus(DifferentialKind::Quadratic)?;
    if g != 1 {
        return Err(TeichError::GenusPlusNotOne(g));
    }
    Ok((total - deficit(quadratic)) / rat_int(2))
}

/// Abelian profile of the canonical orienting double cover: odd order d gives
/// one zero of order d+1 (order 0 dropped), even order d > 0 gives two zeros
/// of order d/2.
pub fn orienting_cover_profile(
    quadratic: &SingularityProfile,
) -> Result<SingularityProfile, ProfileError> {
    let mut orders = Vec::new();
    for &d in quadratic.orders() {
        if d % 2 != 0 {
            if d + 1 != 0 {
                orders.push(d + 1);
            }
        } else {
            orders.push(d / 2);
            orders.push(d / 2);
        }
    }
    orders.retain(|&d| d != 0);
    SingularityProfile::new(orders)
}

/// Quadratic profile of a double cover ramified over the given subset of
/// singularities (by index into the profile): unramified entries duplicate,
/// a ramified order d becomes 2d+2 (order 0 dropped).
pub fn double_cover_profile(
    quadratic: &SingularityProfile,
    ramified: &[usize],
) -> Result<SingularityProfile, TeichError> {
    if ramified.len() % 2 != 0 {
        return Err(TeichError::OddRamification(ramified.len()));
    }
    let ram: HashSet<usize> = ramified.iter().copied().collect();
    let mut orders = Vec::new();
    for (i, &d) in quadratic.orders().iter().enumerate() {
        if ram.contains(&i) {
            let nd = 2 * d + 2;
            if nd != 0 {
                orders.push(nd);
            }
        } else {
            orders.push(d);
            orders.push(d);
        }
    }
    Ok(SingularityProfile::new(orders)?)
}

/// JSON-facing orbit report.
#[derive(Debug, Serialize)]
pub struct OrbitReport {
    pub size: usize,
    pub squares: usize,
    pub profile: Vec<i64>,
    pub stratum: String,
    pub kappa: String,
    pub mean_cyl_sum: String,
    pub total_num: String,
    pub total_den: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub representatives: Option<Vec<OrbitRepresentative>>,
}

#[derive(Debug, Serialize)]
pub struct OrbitRepresentative {
    pub r: String,
    pub u: String,
}

pub fn orbit_report(orbit: &OrbitData, include_representatives: bool) -> OrbitReport {
    let report = sum_lyapunov(orbit, orbit.profile());
    OrbitReport {
        size: orbit.size(),
        squares: orbit.squares(),
        profile: orbit.profile().orders().to_vec(),
        stratum: orbit.profile().label(DifferentialKind::Abelian),
        kappa: rational_string(&report.kappa_abelian),
        mean_cyl_sum: rational_string(&report.mean_cylinder_sum),
        total_num: report.total.numer().to_string(),
        total_den: report.total.denom().to_string(),
        representatives: include_representatives.then(|| {
            orbit
                .representatives()
                .map(|o| OrbitRepresentative {
                    r: o.r().cycle_string(),
                    u: o.u().cycle_string(),
                })
                .collect()
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;
    use crate::origami::parse_perm_body;

    fn origami(n: usize, r: &str, u: &str) -> Origami {
        Origami::new(
            parse_perm_body(n, r).unwrap(),
            parse_perm_body(n, u).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn torus_is_fixed_by_both_generators() {
        let t = Origami::torus();
        assert_eq!(act_t(&t), t);
        assert_eq!(act_s(&t), t);
    }

    #[test]
    fn canonical_form_idempotent_and_stable() {
        let o = origami(3, "(1,2)", "(1,3)");
        let c = canonical_form(&o).unwrap();
        assert_eq!(canonical_form(&c).unwrap(), c);
        let pi = parse_perm_body(3, "(1,3,2)").unwrap();
        assert_eq!(canonical_form(&o.relabel(&pi)).unwrap(), c);
        assert_eq!(canonical_form(&Origami::torus()).unwrap(), Origami::torus());
    }

    #[test]
    fn torus_orbit_is_single_point() {
        let data = orbit(&Origami::torus(), 10).unwrap();
        assert_eq!(data.size(), 1);
        let rep = sum_lyapunov(&data, data.profile());
        assert_eq!(rep.total, rat_int(1));
        assert_eq!(rep.kappa_abelian, rat_int(0));
    }

    /// Exhaustive oracle: all connected 3-square origamis with profile {2},
    /// up to relabeling.
    fn all_three_square_h2_canonical() -> HashSet<Box<[u16]>> {
        let perms: Vec<Vec<usize>> = vec![
            vec![0, 1, 2],
            vec![0, 2, 1],
            vec![1, 0, 2],
            vec![1, 2, 0],
            vec![2, 0, 1],
            vec![2, 1, 0],
        ];
        let mut set = HashSet::new();
        for r in &perms {
            for u in &perms {
                let o = Origami::new(
                    Perm::from_images(r.clone()).unwrap(),
                    Perm::from_images(u.clone()).unwrap(),
                )
                .unwrap();
                if !o.is_connected() {
                    continue;
                }
                if o.singularity_profile().orders() != [2] {
                    continue;
                }
                set.insert(encode(&canonical_form(&o).unwrap()));
            }
        }
        set
    }

    #[test]
    fn three_square_h2_orbit_matches_exhaustive_oracle() {
        let oracle = all_three_square_h2_canonical();
        assert_eq!(oracle.len(), 3);
        let o = origami(3, "(1,2)", "(1,3)");
        let data = orbit(&o, 1000).unwrap();
        assert_eq!(data.size(), 3);
        let got: HashSet<Box<[u16]>> = data.representatives.iter().cloned().collect();
        assert_eq!(got, oracle);
    }

    #[test]
    fn three_square_h2_lyapunov_sum() {
        let o = origami(3, "(1,2)", "(1,3)");
        let data = orbit(&o, 1000).unwrap();
        let rep = sum_lyapunov(&data, data.profile());
        // kappa = (1/12)(2*4/3) = 2/9, mean cylinder sum must be 10/9
        assert_eq!(rep.kappa_abelian, rat(2, 9));
        assert_eq!(rep.mean_cylinder_sum, rat(10, 9));
        assert_eq!(rep.total, rat(4, 3));
    }

    #[test]
    fn orbit_budget_is_enforced() {
        let o = origami(3, "(1,2)", "(1,3)");
        match orbit(&o, 2) {
            Err(TeichError::OrbitBudgetExceeded { budget: 2 }) => {}
            other => panic!("expected budget error, got {other:?}"),
        }
    }

    #[test]
    fn deficit_values() {
        let q16 = SingularityProfile::new(vec![1, 1, 1, 1, 1, 1, -1, -1, -1, -1, -1, -1]).unwrap();
        assert_eq!(deficit(&q16), rat_int(2));
        let even = SingularityProfile::new(vec![2, 2]).unwrap();
        assert_eq!(deficit(&even), rat_int(0));
        let q14 = SingularityProfile::new(vec![1, 1, 1, 1, -1, -1, -1, -1]).unwrap();
        assert_eq!(deficit(&q14), rat(4, 3));
    }

    #[test]
    fn lambda_plus_halving() {
        let q16 = SingularityProfile::new(vec![1, 1, 1, 1, 1, 1, -1, -1, -1, -1, -1, -1]).unwrap();
        let total = rat(3088, 1053);
        assert_eq!(lambda_plus_from_cover(&total, &q16).unwrap(), rat(491, 1053));
        // algebraic round trip: (2x + deficit, profile) -> x
        let x = rat(7, 5);
        let total2 = rat_int(2) * &x + deficit(&q16);
        assert_eq!(lambda_plus_from_cover(&total2, &q16).unwrap(), x);
        // genus-0 profile rejected
        let q0 = SingularityProfile::new(vec![1, -1, -1, -1, -1, -1]).unwrap();
        assert!(matches!(
            lambda_plus_from_cover(&total, &q0),
            Err(TeichError::GenusPlusNotOne(0))
        ));
    }

    #[test]
    fn orienting_cover_profiles() {
        let q = SingularityProfile::new(vec![1, -1, -1, -1, -1, -1]).unwrap();
        let h = orienting_cover_profile(&q).unwrap();
        assert_eq!(h.orders(), &[2]);
        let q16 = SingularityProfile::new(vec![1, 1, 1, 1, 1, 1, -1, -1, -1, -1, -1, -1]).unwrap();
        let h26 = orienting_cover_profile(&q16).unwrap();
        assert_eq!(h26.orders(), &[2, 2, 2, 2, 2, 2]);
        let pillowcase = SingularityProfile::new(vec![-1, -1, -1, -1]).unwrap();
        assert!(orienting_cover_profile(&pillowcase).unwrap().is_empty());
    }

    #[test]
    fn double_cover_profiles() {
        // Q(1^m, -1^(m+4)) with the four last entries (poles) ramified
        for m in 1..6i64 {
            let mut orders = vec![1i64; m as usize];
            orders.extend(vec![-1i64; m as usize + 4]);
            let q = SingularityProfile::new(orders).unwrap();
            // profile is sorted descending: poles occupy the tail
            let k = q.len();
            let ram: Vec<usize> = (k - 4..k).collect();
            let cover = double_cover_profile(&q, &ram).unwrap();
            let mut expect = vec![1i64; 2 * m as usize];
            expect.extend(vec![-1i64; 2 * m as usize]);
            let expect = SingularityProfile::new(expect).unwrap();
            assert_eq!(cover, expect, "m = {m}");
            assert_eq!(cover.genus(DifferentialKind::Quadratic), Ok(1));
        }
        // empty ramification duplicates everything
        let q = SingularityProfile::new(vec![2, -1, -1]).unwrap();
        let cover = double_cover_profile(&q, &[]).unwrap();
        assert_eq!(cover.orders(), &[2, 2, -1, -1, -1, -1]);
        // odd ramification rejected
        assert!(matches!(
            double_cover_profile(&q, &[0]),
            Err(TeichError::OddRamification(1))
        ));
    }

    #[test]
    fn generators_preserve_profile_and_connectivity() {
        let o = origami(3, "(1,2)", "(1,3)");
        for img in [act_t(&o), act_s(&o)] {
            assert!(img.is_connected());
            assert_eq!(img.singularity_profile(), o.singularity_profile());
        }
    }
}
