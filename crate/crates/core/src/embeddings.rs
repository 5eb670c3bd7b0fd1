//! Explicit lattice maps: the embedding of T(k,m,n) into the K3 lattice,
//! the rational embedding φ into U³, saturation inside U³ and the
//! embedding of U² ⊕ ⟨−2n⟩ into U³.
//!
//! Maps are stored as matrices whose column `j` holds the destination
//! coordinates of the image of source basis vector `j`.

use num_bigint::BigInt;
use num_integer::{Integer, Roots};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::json;
use crate::lattice::{self, Lattice};
use crate::matrix::{int, IntMatrix, Matrix, RatMatrix};
use crate::names;
use crate::normal_form::{column_hnf, smith_normal_form, unimodular_inverse};

/// Integral map between lattices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeMap {
    pub src: Lattice,
    pub dst: Lattice,
    pub matrix: IntMatrix,
}

/// Map between the rational hulls of two lattices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalMap {
    pub src: Lattice,
    pub dst: Lattice,
    pub matrix: RatMatrix,
}

fn check_shape(src: &Lattice, dst: &Lattice, rows: usize, cols: usize) -> Result<()> {
    if rows != dst.rank() || cols != src.rank() {
        return Err(Error::Dimension(format!(
            "map {}→{} needs a {}×{} matrix, got {rows}×{cols}",
            src.name(),
            dst.name(),
            dst.rank(),
            src.rank()
        )));
    }
    Ok(())
}

impl LatticeMap {
    pub fn new(src: Lattice, dst: Lattice, matrix: IntMatrix) -> Result<Self> {
        check_shape(&src, &dst, matrix.rows(), matrix.cols())?;
        Ok(LatticeMap { src, dst, matrix })
    }

    pub fn identity(l: &Lattice) -> Self {
        LatticeMap {
            src: l.clone(),
            dst: l.clone(),
            matrix: IntMatrix::identity(l.rank()),
        }
    }

    /// Gram matrix of the images of the source basis.
    pub fn image_gram(&self) -> IntMatrix {
        self.matrix.congruence(self.dst.gram())
    }

    /// Form-preserving and injective.
    pub fn is_isometric_embedding(&self) -> bool {
        &self.image_gram() == self.src.gram() && self.matrix.rank() == self.src.rank()
    }

    /// Whether the cokernel of an isometric embedding is torsion-free.
    pub fn is_primitive(&self) -> Result<bool> {
        if !self.is_isometric_embedding() {
            return Err(Error::NotEmbedding);
        }
        Ok(has_torsion_free_cokernel(&self.matrix))
    }

    /// `self` followed by `next`.
    pub fn then(&self, next: &LatticeMap) -> Result<LatticeMap> {
        if self.dst.gram() != next.src.gram() {
            return Err(Error::Dimension(format!(
                "cannot compose {}→{} with {}→{}",
                self.src, self.dst, next.src, next.dst
            )));
        }
        LatticeMap::new(self.src.clone(), next.dst.clone(), &next.matrix * &self.matrix)
    }

    pub fn to_rational(&self) -> RationalMap {
        RationalMap {
            src: self.src.clone(),
            dst: self.dst.clone(),
            matrix: self.matrix.to_rational(),
        }
    }

    pub fn to_json(&self) -> Value {
        serde_json::json!({
            "src": self.src.name(),
            "dst": self.dst.name(),
            "matrix": json::int_matrix::to_value(&self.matrix),
        })
    }

    /// Loads a map whose endpoints are named lattices.
    pub fn from_json(v: &Value) -> Result<Self> {
        let (src, dst) = endpoints(v)?;
        let m = v.get("matrix").ok_or_else(|| Error::Json("map needs \"matrix\"".into()))?;
        let matrix = json::int_matrix::from_value(m, src.rank()).map_err(Error::Json)?;
        LatticeMap::new(src, dst, matrix)
    }
}

fn endpoints(v: &Value) -> Result<(Lattice, Lattice)> {
    let get = |key: &str| {
        v.get(key)
            .and_then(Value::as_str)
            .ok_or_else(|| Error::Json(format!("map needs a string {key:?}")))
            .and_then(names::parse)
    };
    Ok((get("src")?, get("dst")?))
}

impl RationalMap {
    pub fn new(src: Lattice, dst: Lattice, matrix: RatMatrix) -> Result<Self> {
        check_shape(&src, &dst, matrix.rows(), matrix.cols())?;
        Ok(RationalMap { src, dst, matrix })
    }

    pub fn image_gram(&self) -> RatMatrix {
        self.matrix.congruence(&self.dst.gram().to_rational())
    }

    /// Column-wise denominator clearing; same column span over Q.
    pub fn cleared(&self) -> IntMatrix {
        let mut out = IntMatrix::empty(self.matrix.rows(), self.matrix.cols());
        for j in 0..self.matrix.cols() {
            let l = (0..self.matrix.rows())
                .fold(BigInt::one(), |acc, i| acc.lcm(self.matrix[(i, j)].denom()));
            for i in 0..self.matrix.rows() {
                out[(i, j)] = (&self.matrix[(i, j)] * BigRational::from_integer(l.clone())).to_integer();
            }
        }
        out
    }

    pub fn is_injective(&self) -> bool {
        self.cleared().rank() == self.src.rank()
    }

    pub fn is_isometric_embedding(&self) -> bool {
        self.image_gram() == self.src.gram().to_rational() && self.is_injective()
    }

    pub fn integral(&self) -> Option<LatticeMap> {
        Some(LatticeMap {
            src: self.src.clone(),
            dst: self.dst.clone(),
            matrix: self.matrix.to_integer()?,
        })
    }

    pub fn then(&self, next: &RationalMap) -> Result<RationalMap> {
        if self.dst.gram() != next.src.gram() {
            return Err(Error::Dimension(format!(
                "cannot compose {}→{} with {}→{}",
                self.src, self.dst, next.src, next.dst
            )));
        }
        RationalMap::new(self.src.clone(), next.dst.clone(), &next.matrix * &self.matrix)
    }

    pub fn inverse(&self) -> Option<RationalMap> {
        Some(RationalMap {
            src: self.dst.clone(),
            dst: self.src.clone(),
            matrix: self.matrix.inverse()?,
        })
    }

    pub fn to_json(&self) -> Value {
        serde_json::json!({
            "src": self.src.name(),
            "dst": self.dst.name(),
            "matrix": json::rat_matrix::to_value(&self.matrix),
        })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let (src, dst) = endpoints(v)?;
        let m = v.get("matrix").ok_or_else(|| Error::Json("map needs \"matrix\"".into()))?;
        let matrix = json::rat_matrix::from_value(m).map_err(Error::Json)?;
        RationalMap::new(src, dst, matrix)
    }
}

macro_rules! json_serde {
    ($t:ty) => {
        impl Serialize for $t {
            fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
                self.to_json().serialize(s)
            }
        }

        impl<'de> Deserialize<'de> for $t {
            fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
                let v = Value::deserialize(d)?;
                <$t>::from_json(&v).map_err(serde::de::Error::custom)
            }
        }
    };
}

json_serde!(LatticeMap);
json_serde!(RationalMap);

/// Cokernel of `m` (columns = sublattice generators) is torsion-free.
/// A single column is primitive iff its coordinates are coprime.
pub fn has_torsion_free_cokernel(m: &IntMatrix) -> bool {
    if m.cols() == 1 {
        return m.content().is_one();
    }
    smith_normal_form(m)
        .divisors
        .iter()
        .all(|d| d.is_zero() || d.is_one())
}

/// Coordinates, in the simple-root basis, of a primitive vector of E8(−1)
/// with norm −2t.
///
/// With α₁, α₂, α₅, α₇ pairwise orthogonal roots and α₃ meeting only α₁
/// among them, `a·α₁ + b·α₂ + α₃ + c·α₅ + d·α₇` has E8-norm
/// `2(a² − a + 1 + b² + c² + d²)` and coprime coordinates. Taking `a = 0`
/// or `a = 2` always leaves a sum of three squares.
pub fn find_norm_vector_e8(t: u64) -> Result<Vec<BigInt>> {
    if t == 0 {
        return Err(Error::InvalidArgument("norm parameter t must be ≥ 1".into()));
    }
    for a in [0u64, 2, 3, 4, 5, 6, 7, 8] {
        let shift = a * a - a + 1;
        if shift > t {
            break;
        }
        if let Some((b, c, d)) = three_squares(t - shift) {
            let mut v = vec![BigInt::zero(); 8];
            v[0] = BigInt::from(a);
            v[1] = BigInt::from(b);
            v[2] = BigInt::one();
            v[4] = BigInt::from(c);
            v[6] = BigInt::from(d);
            return Ok(v);
        }
    }
    Err(Error::Verification(format!("no norm-{} vector found", 2 * t)))
}

/// Largest-first decomposition `r = b² + c² + d²` with `b ≥ c ≥ d ≥ 0`.
fn three_squares(r: u64) -> Option<(u64, u64, u64)> {
    let mut b = r.sqrt();
    loop {
        let rest = r - b * b;
        let mut c = rest.sqrt().min(b);
        loop {
            let rest2 = rest - c * c;
            let d = rest2.sqrt();
            if d * d == rest2 && d <= c {
                return Some((b, c, d));
            }
            if c == 0 {
                break;
            }
            c -= 1;
        }
        if b == 0 {
            return None;
        }
        b -= 1;
    }
}

const U1: usize = 0;
const U2: usize = 2;
const U3: usize = 4;
const E8_FIRST: usize = 6;
const E8_SECOND: usize = 14;

/// Primitive embedding T(k,m,n) ↪ Λ:
/// δ₁ ↦ e₁¹ + k·e₂¹ + θ_k, δ₂ ↦ e₁¹, δ₃ ↦ e₁² + m·e₂³, δ₄ ↦ e₁³,
/// δ₅ ↦ θ_n, with θ_k in the first E8(−1) and θ_n in the second.
pub fn embed_t_in_lambda(k: i64, m: i64, n: i64) -> Result<LatticeMap> {
    let src = lattice::twisted_t(k, m, n)?;
    let dst = lattice::k3_lattice();
    let theta_k = find_norm_vector_e8(k as u64)?;
    let theta_n = find_norm_vector_e8(n as u64)?;
    let mut a = IntMatrix::empty(22, 5);
    a[(U1, 0)] = int(1);
    a[(U1 + 1, 0)] = int(k);
    for (i, x) in theta_k.into_iter().enumerate() {
        a[(E8_FIRST + i, 0)] = x;
    }
    a[(U1, 1)] = int(1);
    a[(U2, 2)] = int(1);
    a[(U3 + 1, 2)] = int(m);
    a[(U3, 3)] = int(1);
    for (i, x) in theta_n.into_iter().enumerate() {
        a[(E8_SECOND + i, 4)] = x;
    }
    LatticeMap::new(src, dst, a)
}

/// φ : T(k,m,n)⊗Q → U³⊗Q, a₁ ↦ e₁¹, b₁ ↦ k·e₂¹, a₂ ↦ e₁², b₂ ↦ m·e₂²,
/// c ↦ e₁³ − n·e₂³.
pub fn embed_phi_rational(k: i64, m: i64, n: i64) -> Result<RationalMap> {
    let src = lattice::twisted_t(k, m, n)?;
    let dst = lattice::torus_lattice();
    let mut a = IntMatrix::empty(6, 5);
    a[(0, 0)] = int(1);
    a[(1, 1)] = int(k);
    a[(2, 2)] = int(1);
    a[(3, 3)] = int(m);
    a[(4, 4)] = int(1);
    a[(5, 4)] = int(-n);
    RationalMap::new(src, dst, a.to_rational())
}

/// The saturation (image ⊗ Q) ∩ dst of a rational map.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Saturation {
    pub lattice: Lattice,
    /// Inclusion into the destination; its matrix is in column Hermite
    /// normal form.
    pub inclusion: LatticeMap,
}

pub fn intersect_with_integral(f: &RationalMap) -> Result<Saturation> {
    let cleared = f.cleared();
    let r = cleared.rank();
    if r != f.src.rank() {
        return Err(Error::NotInjective);
    }
    let snf = smith_normal_form(&cleared);
    let u_inv = unimodular_inverse(&snf.u).expect("Smith transform is unimodular");
    let span = u_inv.select_columns(&(0..r).collect::<Vec<_>>());
    let basis = column_hnf(&span);
    let name = format!("sat({}->{})", f.src.name(), f.dst.name());
    let lattice = f.dst.pullback(name, &basis)?;
    let inclusion = LatticeMap::new(lattice.clone(), f.dst.clone(), basis)?;
    Ok(Saturation { lattice, inclusion })
}

/// Saturation of φ(T(k,m,n)⊗Q) in U³ together with an explicit isometry
/// from U² ⊕ ⟨−2n⟩ onto it.
#[derive(Clone, Debug)]
pub struct PhiSaturation {
    pub saturation: Saturation,
    pub isometry: LatticeMap,
}

pub fn saturate_phi(k: i64, m: i64, n: i64) -> Result<PhiSaturation> {
    let saturation = intersect_with_integral(&embed_phi_rational(k, m, n)?)?;
    let target = embed_tn_in_u3(n)?;
    let x = saturation
        .inclusion
        .matrix
        .to_rational()
        .solve(&target.matrix.to_rational())
        .and_then(|x| x.to_integer())
        .ok_or_else(|| Error::Verification("U^2+<-2n> does not lie in the saturation".into()))?;
    if !x.determinant()?.abs().is_one() {
        return Err(Error::Verification("change of basis is not unimodular".into()));
    }
    let isometry = LatticeMap::new(target.src.clone(), saturation.lattice.clone(), x)?;
    if !isometry.is_isometric_embedding() {
        return Err(Error::Verification("saturation is not isometric to U^2+<-2n>".into()));
    }
    Ok(PhiSaturation {
        saturation,
        isometry,
    })
}

/// U² ⊕ ⟨−2n⟩ ↪ U³: identity on the two planes, generator ↦ e₁³ − n·e₂³.
pub fn embed_tn_in_u3(n: i64) -> Result<LatticeMap> {
    let src = lattice::u2_plus(n)?;
    let dst = lattice::torus_lattice();
    let mut a = IntMatrix::empty(6, 5);
    for i in 0..4 {
        a[(i, i)] = int(1);
    }
    a[(4, 4)] = int(1);
    a[(5, 4)] = int(-n);
    LatticeMap::new(src, dst, a)
}

/// The rational isometry T(k,m,n)⊗Q → (U² ⊕ ⟨−2n⟩)⊗Q in coordinates,
/// diag(1, k, 1, m, 1): b₁ and b₂ become k and m times the rescaled
/// vectors b₁/k, b₂/m that span hyperbolic planes.
pub fn rational_isometry_t_to_tn(k: i64, m: i64, n: i64) -> Result<RationalMap> {
    let src = lattice::twisted_t(k, m, n)?;
    let dst = lattice::u2_plus(n)?;
    let d = [1, k, 1, m, 1].map(|x| BigRational::from_integer(int(x)));
    let f = RationalMap::new(src, dst, Matrix::diagonal(&d))?;
    if !f.is_isometric_embedding() {
        return Err(Error::Verification("rescaling does not preserve the form".into()));
    }
    Ok(f)
}

/// Inverse direction, diag(1, 1/k, 1, 1/m, 1).
pub fn rational_isometry_tn_to_t(k: i64, m: i64, n: i64) -> Result<RationalMap> {
    rational_isometry_t_to_tn(k, m, n)?
        .inverse()
        .ok_or_else(|| Error::Verification("rescaling is singular".into()))
}

/// All integer vectors with coordinates in `[-bound, bound]`.
pub fn box_vectors(dim: usize, bound: i64) -> Vec<Vec<BigInt>> {
    let side = (2 * bound + 1) as usize;
    let total = side.pow(dim as u32);
    (0..total)
        .map(|mut idx| {
            (0..dim)
                .map(|_| {
                    let c = (idx % side) as i64 - bound;
                    idx /= side;
                    int(c)
                })
                .collect()
        })
        .collect()
}

pub fn is_unimodular_matrix(m: &IntMatrix) -> bool {
    m.is_square() && m.determinant().map_or(false, |d| d.abs().is_one())
}

pub fn coordinates_gcd(v: &[BigInt]) -> BigInt {
    v.iter().fold(BigInt::zero(), |g, x| g.gcd(x)).abs()
}
