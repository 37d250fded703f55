//! Isomorphism invariants, non-isomorphism certificates and the
//! submultiplicative-norm check.

use std::fmt;
use std::sync::Arc;

use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{find_identity, Algebra};
use crate::construct::unitization;
use crate::linalg::Matrix;
use crate::scalar::Scalar;

/// Tolerance for the floating-point norm checks.
pub const NORM_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Fingerprint {
    pub dim: usize,
    pub unital: bool,
    pub commutative: bool,
    pub center_dim: usize,
    pub radical_dim: usize,
}

impl Fingerprint {
    pub fn semisimple(&self) -> bool {
        self.radical_dim == 0
    }
}

impl fmt::Display for Fingerprint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "dim {}, unital {}, commutative {}, center_dim {}, radical_dim {}",
            self.dim, self.unital, self.commutative, self.center_dim, self.radical_dim
        )
    }
}

pub fn fingerprint(a: &Arc<Algebra>) -> Fingerprint {
    Fingerprint {
        dim: a.dim(),
        unital: find_identity(a).is_some(),
        commutative: a.is_commutative(),
        center_dim: center_dim(a),
        radical_dim: radical_dim(a),
    }
}

/// Dimension of `{x : x e_i = e_i x for all i}`.
pub fn center_dim(a: &Algebra) -> usize {
    let n = a.dim();
    let t = a.tensor();
    let mut m = Matrix::zeros(n * n, n);
    for i in 0..n {
        for k in 0..n {
            for l in 0..n {
                m[(i * n + k, l)] = t.get(l, i, k) - t.get(i, l, k);
            }
        }
    }
    n - m.rank()
}

/// Dimension of the Jacobson radical.
///
/// In characteristic zero the radical of a unital algebra `U` is
/// `{x : tr(L_{xy}) = 0 for all y in U}`, with `L` the left regular
/// representation. This is applied in `U = A♯`, and intersected with `A`.
pub fn radical_dim(a: &Arc<Algebra>) -> usize {
    let n = a.dim();
    let (sharp, _) = unitization(a).expect("unitization of a valid algebra");
    let m = n + 1;
    let t = sharp.tensor();
    let left_trace: Vec<Scalar> = (0..m)
        .map(|k| (0..m).map(|r| t.get(k, r, r)).sum())
        .collect();
    // rows: y = e_q of A♯; columns: x = e_p of A
    let mut form = Matrix::zeros(m, n);
    for q in 0..m {
        for p in 0..n {
            let mut acc = Scalar::zero();
            for (k, c) in sharp.basis_product(p, q).iter().enumerate() {
                if !c.is_zero() {
                    acc += &(c * &left_trace[k]);
                }
            }
            form[(q, p)] = acc;
        }
    }
    n - form.rank()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FingerprintField {
    Dim,
    Unital,
    Commutative,
    CenterDim,
    RadicalDim,
}

impl fmt::Display for FingerprintField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FingerprintField::Dim => "dim",
            FingerprintField::Unital => "unital",
            FingerprintField::Commutative => "commutative",
            FingerprintField::CenterDim => "center_dim",
            FingerprintField::RadicalDim => "radical_dim",
        })
    }
}

/// Two algebras differ in an isomorphism invariant, so they are not isomorphic.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub field: FingerprintField,
    pub left: String,
    pub right: String,
}

impl fmt::Display for Certificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {} vs {}", self.field, self.left, self.right)
    }
}

/// First fingerprint field (in the order dim, unital, commutative,
/// center_dim, radical_dim) on which `a` and `b` differ. `None` means the
/// fingerprints agree, not that the algebras are isomorphic.
pub fn distinguish(a: &Arc<Algebra>, b: &Arc<Algebra>) -> Option<Certificate> {
    let (fa, fb) = (fingerprint(a), fingerprint(b));
    let fields = [
        (
            FingerprintField::Dim,
            fa.dim.to_string(),
            fb.dim.to_string(),
        ),
        (
            FingerprintField::Unital,
            fa.unital.to_string(),
            fb.unital.to_string(),
        ),
        (
            FingerprintField::Commutative,
            fa.commutative.to_string(),
            fb.commutative.to_string(),
        ),
        (
            FingerprintField::CenterDim,
            fa.center_dim.to_string(),
            fb.center_dim.to_string(),
        ),
        (
            FingerprintField::RadicalDim,
            fa.radical_dim.to_string(),
            fb.radical_dim.to_string(),
        ),
    ];
    fields
        .into_iter()
        .find(|(_, l, r)| l != r)
        .map(|(field, left, right)| Certificate { field, left, right })
}

#[derive(Clone, Debug, PartialEq)]
pub struct NormReport {
    /// `M = max_ij ||e_i e_j||_1`
    pub mult_constant: f64,
    /// The renormed norm is `renorm_factor * ||.||_1`.
    pub renorm_factor: f64,
    pub samples_checked: usize,
    /// `max ||xy||' - ||x||' ||y||'` over the samples (0 when none were drawn).
    pub max_violation: f64,
    /// Whether the basis-pair check was carried out in exact arithmetic;
    /// false when some structure constant has an irrational modulus.
    pub basis_pairs_exact: bool,
    pub basis_pairs_hold: bool,
}

impl NormReport {
    pub fn passed(&self) -> bool {
        self.max_violation <= NORM_TOLERANCE && self.basis_pairs_hold
    }
}

impl fmt::Display for NormReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "multiplication constant M: {}", self.mult_constant)?;
        writeln!(f, "renorm factor: {}", self.renorm_factor)?;
        writeln!(f, "samples: {}", self.samples_checked)?;
        writeln!(f, "max violation: {:e}", self.max_violation)?;
        writeln!(
            f,
            "basis pairs: {} ({})",
            if self.basis_pairs_hold {
                "hold"
            } else {
                "FAIL"
            },
            if self.basis_pairs_exact {
                "exact"
            } else {
                "floating point"
            }
        )?;
        write!(
            f,
            "verdict: {}",
            if self.passed() { "pass" } else { "FAIL" }
        )
    }
}

fn exact_l1(v: &[Scalar]) -> Option<BigRational> {
    v.iter().try_fold(BigRational::zero(), |acc, c| {
        c.exact_modulus().map(|m| acc + m)
    })
}

fn l1_f64(v: &[(f64, f64)]) -> f64 {
    v.iter().map(|(re, im)| re.hypot(*im)).sum()
}

/// Checks that `||.||' = max(M, 1) ||.||_1` is submultiplicative, exactly on
/// basis pairs and on `samples` seeded random pairs with coefficients in
/// `[-1, 1] + [-1, 1]i`.
pub fn norm_report(a: &Algebra, samples: usize, seed: u64) -> NormReport {
    let n = a.dim();
    let pairs: Vec<&[Scalar]> = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .map(|(i, j)| a.basis_product(i, j))
        .collect();

    let exact: Option<Vec<BigRational>> = pairs.iter().map(|p| exact_l1(p)).collect();
    let (mult_constant, renorm_factor, basis_pairs_exact, basis_pairs_hold) = match exact {
        Some(norms) => {
            let m = norms
                .iter()
                .max()
                .cloned()
                .unwrap_or_else(BigRational::zero);
            let r = if m > BigRational::one() {
                m.clone()
            } else {
                BigRational::one()
            };
            // ||e_i e_j||' <= ||e_i||' ||e_j||'  <=>  r s_ij <= r^2
            let holds = norms.iter().all(|s| &r * s <= &r * &r);
            (to_f64(&m), to_f64(&r), true, holds)
        }
        None => {
            let norms: Vec<f64> = pairs
                .iter()
                .map(|p| p.iter().map(Scalar::modulus_f64).sum())
                .collect();
            let m = norms.iter().cloned().fold(0.0, f64::max);
            let r = m.max(1.0);
            let holds = norms.iter().all(|s| r * s <= r * r + NORM_TOLERANCE);
            (m, r, false, holds)
        }
    };

    let tensor: Vec<(usize, usize, usize, (f64, f64))> = (0..n)
        .flat_map(|i| (0..n).flat_map(move |j| (0..n).map(move |k| (i, j, k))))
        .filter_map(|(i, j, k)| {
            let c = a.tensor().get(i, j, k);
            (!c.is_zero()).then(|| (i, j, k, c.to_f64_pair()))
        })
        .collect();

    let mut max_violation = f64::NEG_INFINITY;
    for s in 0..samples {
        // one independent stream per sample, so sampling order is irrelevant
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(s as u64);
        let mut draw = || -> Vec<(f64, f64)> {
            (0..n)
                .map(|_| (rng.random_range(-1.0..=1.0), rng.random_range(-1.0..=1.0)))
                .collect()
        };
        let x = draw();
        let y = draw();
        let mut xy = vec![(0.0, 0.0); n];
        for &(i, j, k, (cr, ci)) in &tensor {
            let (pr, pi) = (
                x[i].0 * y[j].0 - x[i].1 * y[j].1,
                x[i].0 * y[j].1 + x[i].1 * y[j].0,
            );
            xy[k].0 += pr * cr - pi * ci;
            xy[k].1 += pr * ci + pi * cr;
        }
        let v =
            renorm_factor * l1_f64(&xy) - renorm_factor * l1_f64(&x) * renorm_factor * l1_f64(&y);
        max_violation = max_violation.max(v);
    }
    if samples == 0 {
        max_violation = 0.0;
    }

    NormReport {
        mult_constant,
        renorm_factor,
        samples_checked: samples,
        max_violation,
        basis_pairs_exact,
        basis_pairs_hold,
    }
}

fn to_f64(q: &BigRational) -> f64 {
    use num_traits::ToPrimitive;
    q.to_f64().unwrap_or(f64::INFINITY)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::StructureTensor;
    use crate::construct::direct_sum;
    use crate::corpus::CatalogSpec;

    fn cat(s: &str) -> Arc<Algebra> {
        s.parse::<CatalogSpec>().unwrap().algebra().unwrap()
    }

    fn upper_triangular() -> Arc<Algebra> {
        // basis a = e11, b = e12, c = e22
        let mut t = StructureTensor::zeros(3);
        t.set(0, 0, 0, Scalar::one()); // a a = a
        t.set(0, 1, 1, Scalar::one()); // a b = b
        t.set(1, 2, 1, Scalar::one()); // b c = b
        t.set(2, 2, 2, Scalar::one()); // c c = c
        Arc::new(Algebra::new("upper", vec!["a".into(), "b".into(), "c".into()], t).unwrap())
    }

    #[test]
    fn fingerprint_examples() {
        let f = fingerprint(&cat("matrix:2"));
        assert_eq!(
            f,
            Fingerprint {
                dim: 4,
                unital: true,
                commutative: false,
                center_dim: 1,
                radical_dim: 0
            }
        );
        let f = fingerprint(&cat("zero:1"));
        assert_eq!(
            f,
            Fingerprint {
                dim: 1,
                unital: false,
                commutative: true,
                center_dim: 1,
                radical_dim: 1
            }
        );
        let f = fingerprint(&upper_triangular());
        assert_eq!(f.radical_dim, 1);
        assert_eq!(f.center_dim, 1);
        assert!(f.unital && !f.commutative);
    }

    #[test]
    fn radical_of_truncated_polynomials_and_group_algebras() {
        for k in 1..=5 {
            assert_eq!(radical_dim(&cat(&format!("poly:{k}"))), k - 1);
            assert_eq!(radical_dim(&cat(&format!("cyclic:{k}"))), 0);
            assert_eq!(radical_dim(&cat(&format!("zero:{k}"))), k);
        }
    }

    #[test]
    fn distinguish_examples() {
        let m2 = cat("matrix:2");
        assert_eq!(distinguish(&m2, &m2), None);
        let c = distinguish(&m2, &cat("pointwise:4")).unwrap();
        assert_eq!(c.to_string(), "commutative: false vs true");
        let z = cat("zero:1");
        let s = direct_sum(&z, &cat("pointwise:1")).unwrap();
        let (u, _) = unitization(&z).unwrap();
        assert_eq!(
            distinguish(&s, &u).unwrap().to_string(),
            "unital: false vs true"
        );
    }

    #[test]
    fn norm_examples() {
        let r = norm_report(&cat("zero:1"), 100, 1);
        assert_eq!((r.mult_constant, r.renorm_factor), (0.0, 1.0));
        assert!(r.max_violation <= 0.0);
        assert!(r.passed());

        let r = norm_report(&cat("pointwise:1"), 100, 1);
        assert_eq!((r.mult_constant, r.renorm_factor), (1.0, 1.0));
        assert!(r.passed());

        // e1 e1 = 2 e1, e2 idle
        let mut t = StructureTensor::zeros(2);
        t.set(0, 0, 0, Scalar::from_int(2));
        let a = Algebra::new("twice", vec!["e1".into(), "e2".into()], t).unwrap();
        let r = norm_report(&a, 1000, 3);
        assert_eq!((r.mult_constant, r.renorm_factor), (2.0, 2.0));
        assert!(r.basis_pairs_exact && r.passed(), "{r}");
    }

    #[test]
    fn norm_sampling_is_deterministic() {
        let a = cat("matrix:2");
        assert_eq!(norm_report(&a, 50, 9), norm_report(&a, 50, 9));
        assert_eq!(norm_report(&a, 0, 9).max_violation, 0.0);
    }

    #[test]
    fn irrational_moduli_fall_back_to_floats() {
        let mut t = StructureTensor::zeros(1);
        t.set(0, 0, 0, Scalar::complex(1, 1));
        let a = Algebra::new("w", vec!["w".into()], t).unwrap();
        let r = norm_report(&a, 100, 0);
        assert!(!r.basis_pairs_exact);
        assert!((r.mult_constant - 2f64.sqrt()).abs() < 1e-12);
        assert!(r.passed(), "{r}");
    }
}
