//! Matrices of induced group and Lie-algebra actions.

use super::{monomials_desc_grlex, subsets_lex, RepDescriptor, RepsError};
use crate::CMat;
use num_complex::Complex64;
use std::collections::HashMap;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Matrix of the induced action of `a` on the representation `desc`, in the
/// canonical orthonormal basis.
///
/// Functorial: `induce(desc, AB) = induce(desc, A) · induce(desc, B)` and
/// the identity maps to the identity.
pub fn induce(desc: &RepDescriptor, a: &CMat, cap: usize) -> Result<CMat, RepsError> {
    let e_dim = a.nrows();
    desc.validate(e_dim, cap)?;
    Ok(match desc {
        RepDescriptor::Standard => a.clone(),
        RepDescriptor::Dual => a
            .clone()
            .try_inverse()
            .ok_or_else(|| RepsError::SingularOperator("dual".into()))?
            .transpose(),
        RepDescriptor::Sym(k) => sym_power(a, *k),
        RepDescriptor::Ext(p) => ext_power(a, *p),
        RepDescriptor::Tensor(parts) => {
            let mut acc: Option<CMat> = None;
            for part in parts {
                let m = induce(part, a, cap)?;
                acc = Some(match acc {
                    None => m,
                    Some(prev) => prev.kronecker(&m),
                });
            }
            acc.expect("tensor descriptors are nonempty")
        }
    })
}

/// Matrix of the induced Lie-algebra action (derivative of `induce` at the
/// identity): `x` for the standard representation, `-xᵀ` for the dual,
/// derivations on symmetric and exterior powers, Leibniz sums on tensors.
pub fn induce_lie(desc: &RepDescriptor, x: &CMat, cap: usize) -> Result<CMat, RepsError> {
    let e_dim = x.nrows();
    desc.validate(e_dim, cap)?;
    Ok(match desc {
        RepDescriptor::Standard => x.clone(),
        RepDescriptor::Dual => -x.transpose(),
        RepDescriptor::Sym(k) => sym_power_lie(x, *k),
        RepDescriptor::Ext(p) => ext_power_lie(x, *p),
        RepDescriptor::Tensor(parts) => {
            let dims: Vec<usize> = parts
                .iter()
                .map(|p| p.dim(e_dim).expect("validated"))
                .collect();
            let total: usize = dims.iter().product();
            let mut acc = CMat::zeros(total, total);
            for (slot, part) in parts.iter().enumerate() {
                let m = induce_lie(part, x, cap)?;
                let left: usize = dims[..slot].iter().product();
                let right: usize = dims[slot + 1..].iter().product();
                let term = CMat::identity(left, left)
                    .kronecker(&m)
                    .kronecker(&CMat::identity(right, right));
                acc += term;
            }
            acc
        }
    })
}

fn factorial(n: u16) -> f64 {
    (1..=n as u64).map(|i| i as f64).product()
}

/// Multi-index factorial `a! = Π a_j!`.
fn multi_factorial(a: &[u16]) -> f64 {
    a.iter().map(|&e| factorial(e)).product()
}

/// Sym^k(A) in the orthonormalized monomial basis.
///
/// In the plain polynomial model the column of the monomial `x^a` is the
/// expansion of `Π_j (A e_j)^{a_j}`; conjugating by `diag(sqrt(a!))`
/// transports it to the basis in which induced unitaries are unitary.
fn sym_power(a: &CMat, k: usize) -> CMat {
    let m = a.nrows();
    let monos = monomials_desc_grlex(m, k);
    let index: HashMap<&[u16], usize> = monos
        .iter()
        .enumerate()
        .map(|(i, mono)| (mono.as_slice(), i))
        .collect();
    let dim = monos.len();
    let mut out = CMat::zeros(dim, dim);
    for (col, mono) in monos.iter().enumerate() {
        // Expand the product of linear forms; `poly` maps exponent -> coeff.
        let mut poly: HashMap<Vec<u16>, Complex64> = HashMap::new();
        poly.insert(vec![0u16; m], Complex64::new(1.0, 0.0));
        for (j, &e) in mono.iter().enumerate() {
            for _ in 0..e {
                let mut next: HashMap<Vec<u16>, Complex64> = HashMap::with_capacity(poly.len() * m);
                for (exp, coeff) in &poly {
                    for i in 0..m {
                        let aij = a[(i, j)];
                        if aij == ZERO {
                            continue;
                        }
                        let mut exp2 = exp.clone();
                        exp2[i] += 1;
                        *next.entry(exp2).or_insert(ZERO) += coeff * aij;
                    }
                }
                poly = next;
            }
        }
        for (exp, coeff) in poly {
            let row = index[exp.as_slice()];
            out[(row, col)] = coeff;
        }
    }
    // Orthonormalization: conjugate by diag(sqrt(a!)); the common 1/k!
    // factor cancels in the conjugation.
    for (row, mono_r) in monos.iter().enumerate() {
        for (col, mono_c) in monos.iter().enumerate() {
            if out[(row, col)] != ZERO {
                let scale = (multi_factorial(mono_r) / multi_factorial(mono_c)).sqrt();
                out[(row, col)] *= Complex64::new(scale, 0.0);
            }
        }
    }
    out
}

/// Lie-algebra action on Sym^k: the derivation sending `x^a` to
/// `Σ_j a_j (X e_j) x^{a - δ_j}`, in the same orthonormalized basis.
fn sym_power_lie(x: &CMat, k: usize) -> CMat {
    let m = x.nrows();
    let monos = monomials_desc_grlex(m, k);
    let index: HashMap<&[u16], usize> = monos
        .iter()
        .enumerate()
        .map(|(i, mono)| (mono.as_slice(), i))
        .collect();
    let dim = monos.len();
    let mut out = CMat::zeros(dim, dim);
    for (col, mono) in monos.iter().enumerate() {
        for (j, &e) in mono.iter().enumerate() {
            if e == 0 {
                continue;
            }
            for i in 0..m {
                let xij = x[(i, j)];
                if xij == ZERO {
                    continue;
                }
                let mut exp = mono.clone();
                exp[j] -= 1;
                exp[i] += 1;
                let row = index[exp.as_slice()];
                let scale = (multi_factorial(&exp) / multi_factorial(mono)).sqrt();
                out[(row, col)] += xij * Complex64::new(e as f64 * scale, 0.0);
            }
        }
    }
    out
}

/// Ext^p(A): the matrix of p×p minors, rows and columns indexed by
/// lexicographic p-subsets.
fn ext_power(a: &CMat, p: usize) -> CMat {
    let m = a.nrows();
    let subs = subsets_lex(m, p);
    let dim = subs.len();
    let mut out = CMat::zeros(dim, dim);
    for (col, t) in subs.iter().enumerate() {
        for (row, s) in subs.iter().enumerate() {
            let minor = CMat::from_fn(p, p, |i, j| a[(s[i], t[j])]);
            out[(row, col)] = det(&minor);
        }
    }
    out
}

/// Lie-algebra action on Ext^p: replace one wedge slot at a time, with the
/// reordering sign.
fn ext_power_lie(x: &CMat, p: usize) -> CMat {
    let m = x.nrows();
    let subs = subsets_lex(m, p);
    let index: HashMap<&[usize], usize> = subs
        .iter()
        .enumerate()
        .map(|(i, s)| (s.as_slice(), i))
        .collect();
    let dim = subs.len();
    let mut out = CMat::zeros(dim, dim);
    for (col, s) in subs.iter().enumerate() {
        for (slot, &l) in s.iter().enumerate() {
            for i in 0..m {
                let xil = x[(i, l)];
                if xil == ZERO {
                    continue;
                }
                if i != l && s.contains(&i) {
                    continue; // repeated factor wedges to zero
                }
                let mut replaced: Vec<usize> = s.clone();
                replaced[slot] = i;
                // Sort and count transpositions for the sign.
                let mut sign = 1.0;
                let mut sorted = replaced.clone();
                for a_idx in 0..sorted.len() {
                    for b_idx in (a_idx + 1..sorted.len()).rev() {
                        if sorted[b_idx - 1] > sorted[b_idx] {
                            sorted.swap(b_idx - 1, b_idx);
                            sign = -sign;
                        }
                    }
                }
                let row = index[sorted.as_slice()];
                out[(row, col)] += xil * Complex64::new(sign, 0.0);
            }
        }
    }
    out
}

pub(crate) fn det(m: &CMat) -> Complex64 {
    match m.nrows() {
        0 => Complex64::new(1.0, 0.0),
        1 => m[(0, 0)],
        2 => m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)],
        _ => m.clone().lu().determinant(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::util::Rng;

    fn diag(entries: &[f64]) -> CMat {
        CMat::from_fn(entries.len(), entries.len(), |i, j| {
            if i == j {
                Complex64::new(entries[i], 0.0)
            } else {
                ZERO
            }
        })
    }

    #[test]
    fn ext2_of_diagonal_is_pair_products() {
        let a = diag(&[2.0, 3.0, 5.0]);
        let e = induce(&RepDescriptor::Ext(2), &a, 10_000).unwrap();
        // subsets {0,1},{0,2},{1,2}
        assert!((e[(0, 0)].re - 6.0).abs() < 1e-14);
        assert!((e[(1, 1)].re - 10.0).abs() < 1e-14);
        assert!((e[(2, 2)].re - 15.0).abs() < 1e-14);
    }

    #[test]
    fn sym2_of_diagonal_is_monomial_products() {
        let a = diag(&[2.0, 3.0]);
        let s = induce(&RepDescriptor::Sym(2), &a, 10_000).unwrap();
        assert!((s[(0, 0)].re - 4.0).abs() < 1e-14);
        assert!((s[(1, 1)].re - 6.0).abs() < 1e-14);
        assert!((s[(2, 2)].re - 9.0).abs() < 1e-14);
    }

    #[test]
    fn ext2_matches_minor_expansion_oracle() {
        // Laplace-expansion determinants, independent of the LU route.
        fn laplace_det(m: &CMat) -> Complex64 {
            let n = m.nrows();
            if n == 1 {
                return m[(0, 0)];
            }
            let mut acc = ZERO;
            for j in 0..n {
                let sub = CMat::from_fn(n - 1, n - 1, |r, c| m[(r + 1, if c < j { c } else { c + 1 })]);
                let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
                acc += m[(0, j)] * laplace_det(&sub) * Complex64::new(sign, 0.0);
            }
            acc
        }
        let mut rng = Rng::seed_from_u64(51);
        let a = rng.gaussian_matrix(3, 3);
        let e = induce(&RepDescriptor::Ext(2), &a, 10_000).unwrap();
        let subs = subsets_lex(3, 2);
        for (row, s) in subs.iter().enumerate() {
            for (col, t) in subs.iter().enumerate() {
                let minor = CMat::from_fn(2, 2, |i, j| a[(s[i], t[j])]);
                assert!((e[(row, col)] - laplace_det(&minor)).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn functoriality_and_identity() {
        let mut rng = Rng::seed_from_u64(52);
        let descs = [
            RepDescriptor::Standard,
            RepDescriptor::Dual,
            RepDescriptor::Sym(2),
            RepDescriptor::Sym(3),
            RepDescriptor::Ext(2),
            RepDescriptor::Tensor(vec![RepDescriptor::Standard, RepDescriptor::Ext(2)]),
        ];
        for desc in &descs {
            let dim = desc.dim(3).unwrap();
            let id = induce(desc, &CMat::identity(3, 3), 10_000).unwrap();
            assert!((id - CMat::identity(dim, dim)).norm() < 1e-12, "{desc}");
            for _ in 0..100 {
                let a = rng.gaussian_matrix(3, 3) + CMat::identity(3, 3);
                let b = rng.gaussian_matrix(3, 3) + CMat::identity(3, 3);
                if super::det(&a).norm() < 1e-3 || super::det(&b).norm() < 1e-3 {
                    continue;
                }
                let lhs = induce(desc, &(&a * &b), 10_000).unwrap();
                let rhs = induce(desc, &a, 10_000).unwrap() * induce(desc, &b, 10_000).unwrap();
                let rel = (lhs.clone() - &rhs).norm() / rhs.norm().max(1.0);
                assert!(rel < 1e-9, "{desc}: functoriality defect {rel}");
            }
        }
    }

    #[test]
    fn induced_unitaries_are_unitary() {
        let mut rng = Rng::seed_from_u64(53);
        let u = rng.unitary(3);
        for desc in [
            RepDescriptor::Dual,
            RepDescriptor::Sym(3),
            RepDescriptor::Ext(2),
        ] {
            let v = induce(&desc, &u, 10_000).unwrap();
            let n = v.nrows();
            assert!(
                (v.adjoint() * &v - CMat::identity(n, n)).norm() < 1e-10,
                "{desc}"
            );
        }
    }

    #[test]
    fn lie_action_is_derivative_of_group_action() {
        let mut rng = Rng::seed_from_u64(54);
        let x = rng.gaussian_matrix(3, 3) * Complex64::new(0.5, 0.0);
        let eps = 1e-6;
        for desc in [
            RepDescriptor::Dual,
            RepDescriptor::Sym(2),
            RepDescriptor::Ext(2),
            RepDescriptor::Tensor(vec![RepDescriptor::Standard, RepDescriptor::Dual]),
        ] {
            let rho = induce_lie(&desc, &x, 10_000).unwrap();
            let plus = induce(
                &desc,
                &(CMat::identity(3, 3) + &x * Complex64::new(eps, 0.0)),
                10_000,
            )
            .unwrap();
            let minus = induce(
                &desc,
                &(CMat::identity(3, 3) - &x * Complex64::new(eps, 0.0)),
                10_000,
            )
            .unwrap();
            let fd = (plus - minus) / Complex64::new(2.0 * eps, 0.0);
            assert!((fd - &rho).norm() < 1e-8, "{desc}");
        }
    }
}
