//! Lattice polytopes with rational vertices: exact facet enumeration and
//! lattice-point counting of dilations.

use super::FutakiError;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

/// A full-dimensional polytope `P ⊂ ℝⁿ` given by rational vertices, with
/// the dilation range `kmax` it will be queried at.
#[derive(Debug, Clone)]
pub struct PolytopeData {
    dim: usize,
    vertices: Vec<Vec<BigRational>>,
    kmax: usize,
    /// Facets as integer inequalities `⟨a, x⟩ <= b`.
    facets: Vec<(Vec<BigInt>, BigInt)>,
}

impl PolytopeData {
    pub fn new(
        dim: usize,
        vertices: Vec<Vec<BigRational>>,
        kmax: usize,
    ) -> Result<Self, FutakiError> {
        if dim == 0 || vertices.len() < dim + 1 {
            return Err(FutakiError::NotFullDimensional);
        }
        for v in &vertices {
            if v.len() != dim {
                return Err(FutakiError::Invalid(format!(
                    "vertex has {} coordinates, expected {dim}",
                    v.len()
                )));
            }
        }
        if kmax == 0 {
            return Err(FutakiError::Invalid("kmax must be positive".into()));
        }
        let facets = enumerate_facets(dim, &vertices)?;
        Ok(Self {
            dim,
            vertices,
            kmax,
            facets,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn kmax(&self) -> usize {
        self.kmax
    }

    pub fn vertices(&self) -> &[Vec<BigRational>] {
        &self.vertices
    }

    /// Lattice points of the dilation `k·P`, in ascending lexicographic
    /// order: exact integer arithmetic against the facet inequalities.
    pub fn lattice_points(&self, k: usize) -> Vec<Vec<i64>> {
        let kq = BigInt::from(k);
        // Bounding box of k·P.
        let mut lo = vec![i64::MAX; self.dim];
        let mut hi = vec![i64::MIN; self.dim];
        for v in &self.vertices {
            for (j, c) in v.iter().enumerate() {
                let scaled = c * BigRational::from_integer(kq.clone());
                let fl = scaled.floor().to_integer();
                let ce = scaled.ceil().to_integer();
                let fl_i: i64 = fl.try_into().expect("desk-scale polytopes");
                let ce_i: i64 = ce.try_into().expect("desk-scale polytopes");
                lo[j] = lo[j].min(fl_i);
                hi[j] = hi[j].max(ce_i);
            }
        }
        let mut out = Vec::new();
        let mut point = lo.clone();
        'outer: loop {
            if self.contains_scaled(&kq, &point) {
                out.push(point.clone());
            }
            // Odometer increment, last coordinate fastest.
            for j in (0..self.dim).rev() {
                point[j] += 1;
                if point[j] <= hi[j] {
                    continue 'outer;
                }
                point[j] = lo[j];
            }
            break;
        }
        out
    }

    /// Exact membership of an integer point in `k·P`:
    /// `⟨a, x⟩ <= k·b` for every facet.
    fn contains_scaled(&self, k: &BigInt, x: &[i64]) -> bool {
        self.facets.iter().all(|(a, b)| {
            let lhs: BigInt = a
                .iter()
                .zip(x)
                .map(|(ai, &xi)| ai * BigInt::from(xi))
                .sum();
            lhs <= b * k
        })
    }
}

/// Facets by exhaustion over vertex subsets: each supporting hyperplane
/// through `dim` affinely independent vertices with all vertices on one
/// side, reduced to a primitive integer normal.
fn enumerate_facets(
    dim: usize,
    vertices: &[Vec<BigRational>],
) -> Result<Vec<(Vec<BigInt>, BigInt)>, FutakiError> {
    let m = vertices.len();
    let mut facets: Vec<(Vec<BigInt>, BigInt)> = Vec::new();
    let mut subset: Vec<usize> = (0..dim).collect();
    let mut full_dimensional = false;

    loop {
        if let Some((normal, offset)) = hyperplane_through(dim, vertices, &subset) {
            let mut any_below = false;
            let mut any_above = false;
            for v in vertices {
                let side = dot_rational(&normal, v) - &offset;
                if side.is_positive() {
                    any_above = true;
                } else if side.is_negative() {
                    any_below = true;
                }
            }
            if any_above != any_below {
                full_dimensional = true;
            }
            if !(any_above && any_below) && (any_above || any_below) {
                // Supporting: orient so the polytope is below.
                let (normal, offset) = if any_above {
                    (
                        normal.iter().map(|a| -a).collect::<Vec<BigInt>>(),
                        -offset,
                    )
                } else {
                    (normal, offset)
                };
                let key = (normal, offset);
                if !facets.contains(&key) {
                    facets.push(key);
                }
            }
        }
        // Next subset.
        let mut j = dim;
        loop {
            if j == 0 {
                if facets.is_empty() || !full_dimensional {
                    return Err(FutakiError::NotFullDimensional);
                }
                facets.sort();
                return Ok(facets);
            }
            j -= 1;
            if subset[j] < m - dim + j {
                subset[j] += 1;
                for l in j + 1..dim {
                    subset[l] = subset[l - 1] + 1;
                }
                break;
            }
        }
    }
}

/// Hyperplane `⟨a, x⟩ = b` through the chosen vertices, as a primitive
/// integer normal; `None` when they are affinely dependent.
fn hyperplane_through(
    dim: usize,
    vertices: &[Vec<BigRational>],
    subset: &[usize],
) -> Option<(Vec<BigInt>, BigInt)> {
    // Solve for the null vector of the (dim-1)×dim difference matrix by
    // rational Gaussian elimination with the normal as cofactors.
    let base = &vertices[subset[0]];
    let rows: Vec<Vec<BigRational>> = subset[1..]
        .iter()
        .map(|&i| {
            vertices[i]
                .iter()
                .zip(base)
                .map(|(a, b)| a - b)
                .collect()
        })
        .collect();
    // Normal components: signed maximal minors of the difference matrix.
    let mut normal_q = vec![BigRational::zero(); dim];
    for drop in 0..dim {
        let minor: Vec<Vec<BigRational>> = rows
            .iter()
            .map(|r| {
                r.iter()
                    .enumerate()
                    .filter(|&(j, _)| j != drop)
                    .map(|(_, v)| v.clone())
                    .collect()
            })
            .collect();
        let det = rational_det(&minor);
        normal_q[drop] = if drop % 2 == 0 { det } else { -det };
    }
    if normal_q.iter().all(|c| c.is_zero()) {
        return None;
    }
    // Clear denominators and divide by gcd.
    let lcm_den = normal_q
        .iter()
        .map(|c| c.denom().clone())
        .fold(BigInt::from(1), lcm_big);
    let mut normal: Vec<BigInt> = normal_q
        .iter()
        .map(|c| c.numer() * (&lcm_den / c.denom()))
        .collect();
    let g = normal
        .iter()
        .fold(BigInt::zero(), |acc, x| gcd_big(acc, x.abs()));
    if !g.is_zero() {
        for c in normal.iter_mut() {
            *c /= &g;
        }
    }
    // Canonical sign: first nonzero positive (orientation fixed later).
    if let Some(first) = normal.iter().find(|c| !c.is_zero()) {
        if first.is_negative() {
            for c in normal.iter_mut() {
                *c = -c.clone();
            }
        }
    }
    let offset_q = dot_rational(&normal, base);
    debug_assert!(offset_q.is_integer() || !offset_q.is_integer());
    // Offset can be rational for rational vertices; scale the whole
    // inequality to integers.
    if offset_q.is_integer() {
        Some((normal, offset_q.to_integer()))
    } else {
        let den = offset_q.denom().clone();
        let normal: Vec<BigInt> = normal.into_iter().map(|c| c * &den).collect();
        Some((normal, offset_q.numer().clone()))
    }
}

fn dot_rational(a: &[BigInt], x: &[BigRational]) -> BigRational {
    a.iter()
        .zip(x)
        .map(|(ai, xi)| BigRational::from_integer(ai.clone()) * xi)
        .sum()
}

fn rational_det(m: &[Vec<BigRational>]) -> BigRational {
    let n = m.len();
    if n == 0 {
        return BigRational::from_integer(1.into());
    }
    let mut work: Vec<Vec<BigRational>> = m.to_vec();
    let mut det = BigRational::from_integer(1.into());
    for col in 0..n {
        let pivot = (col..n).find(|&r| !work[r][col].is_zero());
        let Some(p) = pivot else {
            return BigRational::zero();
        };
        if p != col {
            work.swap(p, col);
            det = -det;
        }
        let pv = work[col][col].clone();
        det *= &pv;
        for r in col + 1..n {
            let factor = &work[r][col] / &pv;
            for c in col..n {
                let sub = &factor * &work[col][c];
                work[r][c] -= sub;
            }
        }
    }
    det
}

fn gcd_big(a: BigInt, b: BigInt) -> BigInt {
    let (mut a, mut b) = (a.abs(), b.abs());
    while !b.is_zero() {
        let t = &a % &b;
        a = b;
        b = t;
    }
    a
}

fn lcm_big(a: BigInt, b: BigInt) -> BigInt {
    if a.is_zero() || b.is_zero() {
        return BigInt::zero();
    }
    let g = gcd_big(a.clone(), b.clone());
    a / g * b
}

/// Parse a rational coordinate string `p/q` or an integer `p`.
pub fn parse_rational(s: &str) -> Result<BigRational, FutakiError> {
    let parts: Vec<&str> = s.split('/').collect();
    let bad = || FutakiError::Invalid(format!("cannot parse rational `{s}`"));
    match parts.as_slice() {
        [p] => Ok(BigRational::from_integer(
            p.trim().parse::<i64>().map_err(|_| bad())?.into(),
        )),
        [p, q] => {
            let num: i64 = p.trim().parse().map_err(|_| bad())?;
            let den: i64 = q.trim().parse().map_err(|_| bad())?;
            if den == 0 {
                return Err(bad());
            }
            Ok(BigRational::new(num.into(), den.into()))
        }
        _ => Err(bad()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    pub(crate) fn interval() -> PolytopeData {
        PolytopeData::new(1, vec![vec![q(-1)], vec![q(1)]], 8).unwrap()
    }

    pub(crate) fn p2_triangle(kmax: usize) -> PolytopeData {
        PolytopeData::new(
            2,
            vec![vec![q(-1), q(-1)], vec![q(2), q(-1)], vec![q(-1), q(2)]],
            kmax,
        )
        .unwrap()
    }

    pub(crate) fn bl1_p2(kmax: usize) -> PolytopeData {
        PolytopeData::new(
            2,
            vec![
                vec![q(-1), q(0)],
                vec![q(0), q(-1)],
                vec![q(2), q(-1)],
                vec![q(-1), q(2)],
            ],
            kmax,
        )
        .unwrap()
    }

    #[test]
    fn interval_counts_are_2k_plus_1() {
        let p = interval();
        for k in 1..=8 {
            assert_eq!(p.lattice_points(k).len(), 2 * k + 1);
        }
    }

    #[test]
    fn p2_anticanonical_has_ten_points_at_degree_one() {
        let p = p2_triangle(4);
        assert_eq!(p.lattice_points(1).len(), 10);
    }

    #[test]
    fn bl1_p2_counts_fit_exact_ehrhart_polynomial() {
        let p = bl1_p2(6);
        let counts: Vec<f64> = (1..=6).map(|k| p.lattice_points(k).len() as f64).collect();
        let ks: Vec<f64> = (1..=6).map(|k| k as f64).collect();
        let coeffs = crate::util::polyfit(&ks, &counts, 2);
        // Anticanonical degree of the one-point blowup is K² = 8, so the
        // Ehrhart leading coefficient (the area) is 8/2! = 4.
        assert!((coeffs[2] - 4.0).abs() < 1e-9, "area {}", coeffs[2]);
        // Exact polynomial: third finite differences vanish.
        for w in counts.windows(4) {
            let d3 = w[3] - 3.0 * w[2] + 3.0 * w[1] - w[0];
            assert_eq!(d3, 0.0);
        }
    }

    #[test]
    fn degenerate_vertex_sets_are_rejected() {
        // Three collinear points in the plane.
        let r = PolytopeData::new(
            2,
            vec![vec![q(0), q(0)], vec![q(1), q(1)], vec![q(2), q(2)]],
            3,
        );
        assert!(matches!(r, Err(FutakiError::NotFullDimensional)));
    }

    #[test]
    fn rational_vertices_are_handled_exactly() {
        // Half-open-ish: [-1/2, 3/2] has 2k+1 points only for even k·(1/2).
        let p = PolytopeData::new(
            1,
            vec![
                vec![BigRational::new((-1).into(), 2.into())],
                vec![BigRational::new(3.into(), 2.into())],
            ],
            4,
        )
        .unwrap();
        // k=1: [-1/2, 3/2] ∩ Z = {0, 1}; k=2: [-1, 3] ∩ Z = 5 points.
        assert_eq!(p.lattice_points(1).len(), 2);
        assert_eq!(p.lattice_points(2).len(), 5);
    }

    #[test]
    fn parse_rational_handles_fractions() {
        assert_eq!(parse_rational("3").unwrap(), q(3));
        assert_eq!(
            parse_rational("-1/2").unwrap(),
            BigRational::new((-1).into(), 2.into())
        );
        assert!(parse_rational("1/0").is_err());
    }
}
