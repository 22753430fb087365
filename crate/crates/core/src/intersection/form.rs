use crate::algebra::Rational;
use crate::cusp::{eta_inverse, FlatIndex, Triplet};
use crate::series::FlatSeries;
use crate::wdvv::Potential;

/// Contravariant intersection form g^{ij} = η^{ik}η^{jl} E(∂_k∂_l F).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntersectionForm {
    triplet: Triplet,
    indices: Vec<FlatIndex>,
    g: Vec<Vec<FlatSeries>>,
}

/// A failed identity, with the offending difference.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentityViolation {
    pub identity: String,
    pub i: FlatIndex,
    pub j: FlatIndex,
    pub difference: String,
}

pub fn intersection_form(f: &Potential) -> IntersectionForm {
    let a = f.triplet();
    let indices = a.flat_indices();
    let s = f.series();
    let n = indices.len();
    let mut g = vec![vec![FlatSeries::new(a, 0, 0); n]; n];
    for x in 0..n {
        // η^{ik} is nonzero only for k the partner of i.
        let px = a.partner(indices[x]);
        let ex = eta_inverse(a, indices[x], px);
        let dx = s.diff(px);
        for y in x..n {
            let py = a.partner(indices[y]);
            let ey = eta_inverse(a, indices[y], py);
            let e = dx.diff(py).euler_apply().scale(&(&ex * &ey));
            g[y][x] = e.clone();
            g[x][y] = e;
        }
    }
    IntersectionForm { triplet: a, indices, g }
}

impl IntersectionForm {
    pub fn triplet(&self) -> Triplet {
        self.triplet
    }

    pub fn indices(&self) -> &[FlatIndex] {
        &self.indices
    }

    pub fn dimension(&self) -> usize {
        self.indices.len()
    }

    pub fn entry(&self, i: FlatIndex, j: FlatIndex) -> &FlatSeries {
        let a = self.triplet;
        &self.g[a.flat_position(i)][a.flat_position(j)]
    }

    pub(crate) fn entry_at(&self, x: usize, y: usize) -> &FlatSeries {
        &self.g[x][y]
    }

    /// Expected mu row: g^{mu,1} = t_1, g^{mu,(i,j)} = ((a_i − j)/a_i) t_{i,j}, g^{mu,mu} = χ.
    pub fn expected_mu_row(&self, j: FlatIndex) -> FlatSeries {
        let a = self.triplet;
        let (k, d) = self.g[0][0].truncation();
        match j {
            FlatIndex::Mu => FlatSeries::constant(a, k, d, a.chi()),
            _ => {
                let w = a.degree_weight(j).expect("weight defined off mu");
                FlatSeries::coordinate(a, k, d, j).scale(&w)
            }
        }
    }

    /// Symmetry and the three mu-row identities, checked as exact series.
    pub fn verify_flat_identities(&self) -> Vec<IdentityViolation> {
        let mut out = Vec::new();
        let n = self.dimension();
        for x in 0..n {
            for y in 0..n {
                if self.g[x][y] != self.g[y][x] {
                    out.push(IdentityViolation {
                        identity: "symmetry".into(),
                        i: self.indices[x],
                        j: self.indices[y],
                        difference: self.g[x][y].sub(&self.g[y][x]).display(),
                    });
                }
            }
        }
        for &j in &self.indices {
            let got = self.entry(FlatIndex::Mu, j);
            let diff = got.sub(&self.expected_mu_row(j));
            if !diff.is_zero() {
                let identity = match j {
                    FlatIndex::Unit => "g^{mu,1} = t_1",
                    FlatIndex::Arm(..) => "g^{mu,(i,j)} = ((a_i-j)/a_i) t_(i,j)",
                    FlatIndex::Mu => "g^{mu,mu} = chi",
                };
                out.push(IdentityViolation { identity: identity.into(), i: FlatIndex::Mu, j, difference: diff.display() });
            }
        }
        out
    }
}

/// Degree constant d_j with E t_j = d_j t_j; none for mu.
pub fn degree_constant(a: Triplet, j: FlatIndex) -> Option<Rational> {
    a.degree_weight(j).filter(|_| j != FlatIndex::Mu)
}
