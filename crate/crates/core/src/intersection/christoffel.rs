use std::collections::BTreeMap;

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::form::{degree_constant, IntersectionForm};
use crate::algebra::{one, Rational};
use crate::cusp::{eta, eta_inverse, FlatIndex, Triplet};
use crate::error::{Error, Result};
use crate::series::{FlatPoint, QPoly, QValue};
use crate::wdvv::Potential;

pub type QMat = Vec<Vec<QPoly>>;

/// Contravariant Christoffel symbols Γ^{ij}_k at one point, with q kept
/// formal, so entries live in Q[q]/(q^{K+1}).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChristoffelSample {
    pub point: FlatPoint,
    pub metric: QMat,
    /// `values[i][j][k]` = Γ^{ij}_k, in flat-index order.
    pub values: Vec<Vec<Vec<QPoly>>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GammaRelationReport {
    pub point: FlatPoint,
    /// (i, j, k) with Γ^{ij}_k ≠ d_j C^{ij}_k, over columns j ≠ mu.
    pub failures: Vec<[FlatIndex; 3]>,
    /// (i, k) with C^{i,mu}_k ≠ δ^i_k.
    pub delta_failures: Vec<[FlatIndex; 2]>,
    /// Nonzero Γ^{i,mu}_k; reported only.
    pub mu_column: Vec<([FlatIndex; 2], QPoly)>,
    pub checked: usize,
}

impl GammaRelationReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty() && self.delta_failures.is_empty()
    }
}

/// Three-point values C_{abc} at one point, keyed by the sorted triple.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThreePointTable {
    pub point: FlatPoint,
    pub values: BTreeMap<[FlatIndex; 3], QPoly>,
}

fn prec_of(p: &FlatPoint, k: u32) -> u32 {
    match p.q {
        QValue::Formal => k,
        QValue::Value(_) => 0,
    }
}

/// Inverse over Q[q]/(q^{K+1}); exists iff the q^0 part is invertible.
pub fn qmat_inverse(m: &QMat) -> Option<QMat> {
    let n = m.len();
    if n == 0 {
        return Some(Vec::new());
    }
    let prec = m[0][0].prec();
    let mut a: QMat = m.clone();
    let mut inv: QMat = (0..n)
        .map(|i| (0..n).map(|j| if i == j { QPoly::one(prec) } else { QPoly::zero(prec) }).collect())
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| a[r][col].is_unit())?;
        a.swap(col, piv);
        inv.swap(col, piv);
        let p = a[col][col].inverse()?;
        for j in 0..n {
            a[col][j] = &a[col][j] * &p;
            inv[col][j] = &inv[col][j] * &p;
        }
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let f = a[r][col].clone();
            for j in 0..n {
                a[r][j] = &a[r][j] - &(&f * &a[col][j]);
                inv[r][j] = &inv[r][j] - &(&f * &inv[col][j]);
            }
        }
    }
    Some(inv)
}

#[cfg(test)]
fn qmat_mul(x: &QMat, y: &QMat) -> QMat {
    let n = x.len();
    let prec = x[0][0].prec();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let mut s = QPoly::zero(prec);
                    for (l, yl) in y.iter().enumerate() {
                        if !x[i][l].is_zero() && !yl[j].is_zero() {
                            s.add_assign_ref(&(&x[i][l] * &yl[j]));
                        }
                    }
                    s
                })
                .collect()
        })
        .collect()
}

impl IntersectionForm {
    pub fn evaluate(&self, point: &FlatPoint) -> QMat {
        let n = self.dimension();
        (0..n).map(|i| (0..n).map(|j| self.entry_at(i, j).evaluate(point)).collect()).collect()
    }

    /// `out[k][i][j]` = ∂_k g^{ij} at the point.
    pub fn derivatives_at(&self, point: &FlatPoint) -> Vec<QMat> {
        let n = self.dimension();
        self.indices()
            .iter()
            .map(|&k| (0..n).map(|i| (0..n).map(|j| self.entry_at(i, j).diff(k).evaluate(point)).collect()).collect())
            .collect()
    }

    /// `count` points with small random rational coordinates and formal q at
    /// which g is invertible.
    pub fn regular_points(&self, count: usize, seed: u64) -> Vec<FlatPoint> {
        let a = self.triplet();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let small = |rng: &mut ChaCha8Rng| Rational::new(rng.gen_range(-4i64..=4).into(), rng.gen_range(1i64..=3).into());
        let mut out = Vec::new();
        for _ in 0..200 * count.max(1) {
            if out.len() == count {
                break;
            }
            let p = FlatPoint {
                t1: small(&mut rng),
                arms: (0..a.arm_count()).map(|_| small(&mut rng)).collect(),
                tmu: small(&mut rng),
                q: QValue::Formal,
            };
            if qmat_inverse(&self.evaluate(&p)).is_some() {
                out.push(p);
            }
        }
        out
    }
}

/// Γ^{ij}_k = −g^{is}Γ^j_{sk}, with Γ^j_{sk} the Christoffel symbols of the
/// covariant metric g_{ij} = (g^{ij})^{-1}. Substituting
/// ∂g_{..} = −g_{..}(∂g^{..})g_{..} gives
///
///   Γ^{ij}_k = ½[∂_k g^{ij} + (g^{is}∂_s g^{jb} − g^{js}∂_s g^{ib}) g_{bk}],
///
/// which multiplies by the (large) covariant entries only once.
pub fn christoffel_at_point(g: &IntersectionForm, point: &FlatPoint) -> Result<ChristoffelSample> {
    let n = g.dimension();
    let upper = g.evaluate(point);
    let lower = qmat_inverse(&upper).ok_or(Error::DegenerateMetric)?;
    let prec = upper[0][0].prec();
    let du = g.derivatives_at(point);
    // m[i][j][b] = g^{is} ∂_s g^{jb}
    let mut m = vec![vec![vec![QPoly::zero(prec); n]; n]; n];
    for i in 0..n {
        for s in 0..n {
            if upper[i][s].is_zero() {
                continue;
            }
            for j in 0..n {
                for b in 0..n {
                    if !du[s][j][b].is_zero() {
                        m[i][j][b].add_assign_ref(&(&upper[i][s] * &du[s][j][b]));
                    }
                }
            }
        }
    }
    let half = Rational::new(1.into(), 2.into());
    let mut values = vec![vec![vec![QPoly::zero(prec); n]; n]; n];
    for i in 0..n {
        for j in 0..n {
            let skew: Vec<QPoly> = (0..n).map(|b| &m[i][j][b] - &m[j][i][b]).collect();
            for k in 0..n {
                let mut v = du[k][i][j].clone();
                for (b, sb) in skew.iter().enumerate() {
                    if !sb.is_zero() && !lower[b][k].is_zero() {
                        v.add_assign_ref(&(sb * &lower[b][k]));
                    }
                }
                values[i][j][k] = v.scale(&half);
            }
        }
    }
    Ok(ChristoffelSample { point: point.clone(), metric: upper, values })
}

/// C^{ij}_k = η^{ii'}η^{jj'}C_{i'j'k} at the point, `out[i][j][k]`.
pub fn raised_three_point(f: &Potential, point: &FlatPoint) -> Vec<Vec<Vec<QPoly>>> {
    let a = f.triplet();
    let idx = a.flat_indices();
    let n = idx.len();
    let mut cache: BTreeMap<[FlatIndex; 3], QPoly> = BTreeMap::new();
    let mut out = Vec::with_capacity(n);
    for &i in &idx {
        let mut row = Vec::with_capacity(n);
        for &j in &idx {
            let (pi, pj) = (a.partner(i), a.partner(j));
            let w = eta_inverse(a, i, pi) * eta_inverse(a, j, pj);
            let col = idx
                .iter()
                .map(|&k| {
                    let mut key = [pi, pj, k];
                    key.sort();
                    cache.entry(key).or_insert_with(|| f.three_point(key[0], key[1], key[2]).evaluate(point)).scale(&w)
                })
                .collect();
            row.push(col);
        }
        out.push(row);
    }
    out
}

/// Checks Γ^{ij}_k = d_j C^{ij}_k for j ≠ mu and C^{i,mu}_k = δ^i_k.
pub fn verify_gamma_relation(f: &Potential, g: &IntersectionForm, point: &FlatPoint) -> Result<GammaRelationReport> {
    let a = f.triplet();
    let idx = a.flat_indices();
    let gamma = christoffel_at_point(g, point)?;
    let c = raised_three_point(f, point);
    let prec = prec_of(point, f.truncation().0);
    let mu = a.flat_position(FlatIndex::Mu);
    let mut report = GammaRelationReport {
        point: point.clone(),
        failures: Vec::new(),
        delta_failures: Vec::new(),
        mu_column: Vec::new(),
        checked: 0,
    };
    for (x, &i) in idx.iter().enumerate() {
        for (z, &k) in idx.iter().enumerate() {
            for (y, &j) in idx.iter().enumerate() {
                match degree_constant(a, j) {
                    Some(d) => {
                        report.checked += 1;
                        if gamma.values[x][y][z] != c[x][y][z].scale(&d) {
                            report.failures.push([i, j, k]);
                        }
                    }
                    None => {
                        if !gamma.values[x][y][z].is_zero() {
                            report.mu_column.push(([i, k], gamma.values[x][y][z].clone()));
                        }
                    }
                }
            }
            let delta = if i == k { QPoly::one(prec) } else { QPoly::zero(prec) };
            if c[x][mu][z] != delta {
                report.delta_failures.push([i, k]);
            }
        }
    }
    Ok(report)
}

/// Recovers C_{abc} at each point from Γ alone: C^{ij}_k = Γ^{ij}_k / d_j,
/// lowered with η. Every ordering of a triple with a usable middle index
/// must give the same value; C_{111} = η_{11} comes from the unit axiom.
pub fn reconstruct_from_intersection(g: &IntersectionForm, points: &[FlatPoint]) -> Result<Vec<ThreePointTable>> {
    let a = g.triplet();
    let idx = a.flat_indices();
    let n = idx.len();
    let mut out = Vec::with_capacity(points.len());
    for point in points {
        let gamma = christoffel_at_point(g, point)?;
        let prec = gamma.metric[0][0].prec();
        // C_{abc} = η_{a,a'}η_{b,b'} C^{a'b'}_c with a', b' the partners.
        let lowered = |x: usize, y: usize, z: usize| -> Option<QPoly> {
            let (pa, pb) = (a.partner(idx[x]), a.partner(idx[y]));
            let d = degree_constant(a, pb)?;
            let w = eta(a, idx[x], pa) * eta(a, idx[y], pb) / d;
            Some(gamma.values[a.flat_position(pa)][a.flat_position(pb)][z].scale(&w))
        };
        let mut values = BTreeMap::new();
        for x in 0..n {
            for y in x..n {
                for z in y..n {
                    let perms = [[x, y, z], [x, z, y], [y, x, z], [y, z, x], [z, x, y], [z, y, x]];
                    let mut found: Option<QPoly> = None;
                    for p in perms {
                        if let Some(v) = lowered(p[0], p[1], p[2]) {
                            match &found {
                                None => found = Some(v),
                                Some(f) if *f != v => {
                                    return Err(Error::InconsistentRecovery(format!(
                                        "C({},{},{}) differs between orderings",
                                        idx[x], idx[y], idx[z]
                                    )))
                                }
                                _ => {}
                            }
                        }
                    }
                    let v = found.unwrap_or_else(|| QPoly::constant(eta(a, idx[x], idx[y]) * eta_unit(a, idx[z]), prec));
                    values.insert([idx[x], idx[y], idx[z]], v);
                }
            }
        }
        out.push(ThreePointTable { point: point.clone(), values });
    }
    Ok(out)
}

// Only reached for (1,1,1), where C = η_{11} = 0 whatever the factor.
fn eta_unit(a: Triplet, z: FlatIndex) -> Rational {
    if eta(a, FlatIndex::Unit, z).is_zero() {
        one()
    } else {
        Rational::zero()
    }
}

/// Triples whose recovered value differs from the potential's.
pub fn round_trip_mismatches(f: &Potential, table: &ThreePointTable) -> Vec<[FlatIndex; 3]> {
    table
        .values
        .iter()
        .filter(|(k, v)| f.three_point(k[0], k[1], k[2]).evaluate(&table.point) != **v)
        .map(|(k, _)| *k)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat;
    use crate::intersection::intersection_form;
    use crate::wdvv::{solve, ReconstructionConfig};

    fn d4() -> Potential {
        let a = Triplet::new(2, 2, 2).unwrap();
        solve(a, &ReconstructionConfig::new(2, 6)).unwrap()
    }

    /// −g^{is}Γ^j_{sk} computed literally: covariant derivatives
    /// ∂_k g_{ab} = −g_{ai}∂_k g^{ij}g_{jb}, Christoffel symbols of the first
    /// and second kind, then one index raised.
    fn covariant_route(g: &IntersectionForm, p: &FlatPoint) -> Vec<Vec<Vec<QPoly>>> {
        let n = g.dimension();
        let up = g.evaluate(p);
        let low = qmat_inverse(&up).unwrap();
        let prec = up[0][0].prec();
        let d_low: Vec<QMat> = g
            .derivatives_at(p)
            .iter()
            .map(|du| qmat_mul(&qmat_mul(&low, du), &low).into_iter().map(|r| r.iter().map(|x| -x).collect()).collect())
            .collect();
        let half = rat(1, 2);
        let mut second = vec![vec![vec![QPoly::zero(prec); n]; n]; n];
        for j in 0..n {
            for s in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        let first = (&(&d_low[s][l][k] + &d_low[k][l][s]) - &d_low[l][s][k]).scale(&half);
                        second[j][s][k] = &second[j][s][k] + &(&up[j][l] * &first);
                    }
                }
            }
        }
        let mut out = vec![vec![vec![QPoly::zero(prec); n]; n]; n];
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for s in 0..n {
                        out[i][j][k] = &out[i][j][k] - &(&up[i][s] * &second[j][s][k]);
                    }
                }
            }
        }
        out
    }

    #[test]
    fn two_routes_agree() {
        let f = d4();
        let g = intersection_form(&f);
        for p in g.regular_points(3, 7) {
            let s = christoffel_at_point(&g, &p).unwrap();
            assert_eq!(s.values, covariant_route(&g, &p));
        }
    }

    #[test]
    fn gamma_relation_and_round_trip() {
        let f = d4();
        let g = intersection_form(&f);
        let pts = g.regular_points(5, 1);
        assert_eq!(pts.len(), 5);
        for p in &pts {
            let r = verify_gamma_relation(&f, &g, p).unwrap();
            assert!(r.passed(), "{:?}", r.failures);
        }
        for t in reconstruct_from_intersection(&g, &pts).unwrap() {
            assert!(round_trip_mismatches(&f, &t).is_empty());
            let a = f.triplet();
            for x in a.flat_indices() {
                for y in a.flat_indices() {
                    let mut k = [FlatIndex::Unit, x, y];
                    k.sort();
                    assert_eq!(t.values[&k], QPoly::constant(eta(a, x, y), 2));
                }
            }
        }
    }

    #[test]
    fn degenerate_point() {
        let f = d4();
        let g = intersection_form(&f);
        let zero = FlatPoint {
            t1: Rational::zero(),
            arms: vec![Rational::zero(); 3],
            tmu: Rational::zero(),
            q: QValue::Formal,
        };
        assert_eq!(christoffel_at_point(&g, &zero), Err(Error::DegenerateMetric));
    }
}
