//! Exact and series kernels for the su(2) Lie algebra and SU(2) group.
//!
//! Algebra elements are stored by their coefficients in the basis
//! `t^k = i sigma^k / 2` (sigma^k the Pauli matrices), so an element is
//! `X = (i/2) a . sigma` with real `a = (a1, a2, a3)`. In this basis
//!
//! * the scalar product `Re tr(X Y^H)` is `a . b / 2`,
//! * the bracket `[X, Y]` has coefficients `-(a x b)`,
//! * the exponential has the closed Rodrigues-type form
//!   `exp(X) = cos(|a|/2) 1 + sin(|a|/2) i (n . sigma)`, `n = a/|a|`.
//!
//! Group elements are unitary 2x2 matrices with unit determinant. Inverses
//! are hermitian conjugates, so long products stay special unitary to
//! rounding.

use crate::mat2::Mat2;
use crate::{Error, Result};
use num_complex::Complex64;

/// Default truncation order for the Baker-Campbell-Hausdorff series.
pub const BCH_ORDER: usize = 6;
/// Default truncation order for the differential of the exponential map.
pub const DEXP_ORDER: usize = 8;

/// Even Bernoulli numbers B_2 .. B_12 as exact rationals evaluated to f64.
/// Odd Bernoulli numbers above B_1 vanish, so these are all the recursion
/// needs up to order 13.
const BERNOULLI_EVEN: [f64; 6] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
];

/// An su(2) element, coefficients in the basis `t^k = i sigma^k / 2`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct AlgebraElement {
    pub a: [f64; 3],
}

impl AlgebraElement {
    pub const ZERO: AlgebraElement = AlgebraElement { a: [0.0; 3] };

    pub fn new(a1: f64, a2: f64, a3: f64) -> Self {
        AlgebraElement { a: [a1, a2, a3] }
    }

    /// Basis element `t^k`, k in 1..=3.
    pub fn generator(k: usize) -> Self {
        let mut a = [0.0; 3];
        a[k - 1] = 1.0;
        AlgebraElement { a }
    }

    /// The anti-hermitian traceless matrix `(i/2) a . sigma`.
    pub fn as_matrix(&self) -> Mat2 {
        let [a1, a2, a3] = self.a;
        Mat2::new(
            Complex64::new(0.0, 0.5 * a3),
            Complex64::new(0.5 * a2, 0.5 * a1),
            Complex64::new(-0.5 * a2, 0.5 * a1),
            Complex64::new(0.0, -0.5 * a3),
        )
    }

    /// Recover coefficients from an anti-hermitian traceless 2x2 matrix.
    pub fn from_matrix(m: &Mat2) -> Self {
        AlgebraElement {
            a: [
                m.0[1].im + m.0[2].im,
                m.0[1].re - m.0[2].re,
                m.0[0].im - m.0[3].im,
            ],
        }
    }

    pub fn add(&self, o: &AlgebraElement) -> AlgebraElement {
        AlgebraElement {
            a: [
                self.a[0] + o.a[0],
                self.a[1] + o.a[1],
                self.a[2] + o.a[2],
            ],
        }
    }

    pub fn sub(&self, o: &AlgebraElement) -> AlgebraElement {
        AlgebraElement {
            a: [
                self.a[0] - o.a[0],
                self.a[1] - o.a[1],
                self.a[2] - o.a[2],
            ],
        }
    }

    pub fn scale(&self, s: f64) -> AlgebraElement {
        AlgebraElement {
            a: [self.a[0] * s, self.a[1] * s, self.a[2] * s],
        }
    }

    pub fn neg(&self) -> AlgebraElement {
        self.scale(-1.0)
    }

    /// Euclidean length of the coefficient vector. The rotation angle of
    /// `exp(X)` equals this length.
    pub fn coeff_norm(&self) -> f64 {
        (self.a[0] * self.a[0] + self.a[1] * self.a[1] + self.a[2] * self.a[2]).sqrt()
    }

    /// Norm induced by the scalar product, `sqrt(inner(X, X)) = |a|/sqrt(2)`.
    pub fn norm(&self) -> f64 {
        self.coeff_norm() / std::f64::consts::SQRT_2
    }

    pub fn is_zero(&self) -> bool {
        self.a == [0.0; 3]
    }
}

/// An SU(2) element as a unitary 2x2 matrix with unit determinant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GroupElement(pub Mat2);

impl GroupElement {
    pub const IDENTITY: GroupElement = GroupElement(Mat2::IDENTITY);

    pub fn matrix(&self) -> &Mat2 {
        &self.0
    }

    /// Inverse via the hermitian conjugate; exact for unitary matrices.
    pub fn inverse(&self) -> GroupElement {
        GroupElement(self.0.adjoint())
    }

    pub fn mul(&self, o: &GroupElement) -> GroupElement {
        GroupElement(self.0 * o.0)
    }

    /// Deviation from unitarity, `|| U^H U - 1 ||_F`.
    pub fn unitarity_defect(&self) -> f64 {
        (self.0.adjoint() * self.0 - Mat2::IDENTITY).norm()
    }

    /// Deviation from unit determinant, `| det U - 1 |`.
    pub fn det_defect(&self) -> f64 {
        (self.0.det() - Complex64::new(1.0, 0.0)).norm()
    }
}

/// Closed-form exponential map su(2) -> SU(2).
///
/// For `X = (theta/2) i (n . sigma)` with `theta = |a|` this is
/// `cos(theta/2) 1 + sin(theta/2) i (n . sigma)`; `theta = 0` returns the
/// identity. Exact to rounding, branch free.
pub fn exp(x: &AlgebraElement) -> GroupElement {
    let theta = x.coeff_norm();
    // sin(theta/2)/theta -> 1/2 as theta -> 0; the series keeps full
    // precision through the switchover.
    let s = if theta < 1e-8 {
        0.5 - theta * theta / 48.0
    } else {
        (0.5 * theta).sin() / theta
    };
    let q0 = (0.5 * theta).cos();
    let q = [s * x.a[0], s * x.a[1], s * x.a[2]];
    GroupElement(Mat2::new(
        Complex64::new(q0, q[2]),
        Complex64::new(q[1], q[0]),
        Complex64::new(-q[1], q[0]),
        Complex64::new(q0, -q[2]),
    ))
}

/// Principal logarithm SU(2) -> su(2), defined for `tr U` away from -2.
///
/// Returns `X` with coefficient norm below `2 pi` such that
/// `exp(X) = U`. Fails with [`Error::BranchAmbiguity`] at the antipode
/// `tr U = -2`, where the rotation axis is undetermined.
pub fn log(u: &GroupElement) -> Result<AlgebraElement> {
    let m = &u.0;
    let trace = m.trace().re;
    if (trace + 2.0).abs() <= 1e-9 {
        return Err(Error::BranchAmbiguity);
    }
    // Quaternion components of U = q0 + i q . sigma.
    let q0 = 0.5 * trace;
    let q = [
        0.5 * (m.0[1].im + m.0[2].im),
        0.5 * (m.0[1].re - m.0[2].re),
        0.5 * (m.0[0].im - m.0[3].im),
    ];
    let s = (q[0] * q[0] + q[1] * q[1] + q[2] * q[2]).sqrt();
    if s == 0.0 {
        return Ok(AlgebraElement::ZERO);
    }
    let theta = 2.0 * s.atan2(q0);
    let factor = theta / s;
    Ok(AlgebraElement::new(
        factor * q[0],
        factor * q[1],
        factor * q[2],
    ))
}

/// Real scalar product of 2x2 matrices, `g' . g = Re tr(g' g^H)`.
pub fn inner(g: &Mat2, g_prime: &Mat2) -> f64 {
    g.inner(g_prime)
}

/// Scalar product of algebra elements, `a . b / 2` in coefficients.
pub fn inner_alg(x: &AlgebraElement, y: &AlgebraElement) -> f64 {
    0.5 * (x.a[0] * y.a[0] + x.a[1] * y.a[1] + x.a[2] * y.a[2])
}

/// Adjoint action `ad_X Y = [X, Y] = XY - YX`; coefficients `-(a x b)`.
pub fn ad(x: &AlgebraElement, y: &AlgebraElement) -> AlgebraElement {
    let a = &x.a;
    let b = &y.a;
    AlgebraElement::new(
        -(a[1] * b[2] - a[2] * b[1]),
        -(a[2] * b[0] - a[0] * b[2]),
        -(a[0] * b[1] - a[1] * b[0]),
    )
}

/// Truncated Baker-Campbell-Hausdorff series `Z = log(exp(X) exp(Y))`,
/// summed through the requested order.
///
/// Terms follow the standard commutator recursion
/// `(n+1) c_{n+1} = 1/2 [X - Y, c_n]
///  + sum_p B_{2p}/(2p)! sum_{k_1+..+k_{2p} = n} [c_{k_1}, [.. [c_{k_{2p}}, X+Y] ..]]`
/// with `c_1 = X + Y` and even Bernoulli numbers `B_{2p}`.
pub fn bch(x: &AlgebraElement, y: &AlgebraElement, order: usize) -> Result<AlgebraElement> {
    let terms = bch_terms(x, y, order)?;
    let mut z = AlgebraElement::ZERO;
    for t in &terms {
        z = z.add(t);
    }
    Ok(z)
}

/// The individual BCH terms `c_1 .. c_order`.
pub fn bch_terms(
    x: &AlgebraElement,
    y: &AlgebraElement,
    order: usize,
) -> Result<Vec<AlgebraElement>> {
    if order < 1 {
        return Err(Error::InvalidOrder(order));
    }
    let xpy = x.add(y);
    let xmy = x.sub(y);
    let mut c: Vec<AlgebraElement> = Vec::with_capacity(order);
    c.push(xpy);
    for n in 1..order {
        // (n+1) c_{n+1}, with c indices 1-based: c[k-1] = c_k.
        let mut rhs = ad(&xmy, &c[n - 1]).scale(0.5);
        let mut p = 1;
        while 2 * p <= n {
            let coeff = BERNOULLI_EVEN[p - 1] / factorial(2 * p);
            let mut sum = AlgebraElement::ZERO;
            for comp in compositions(n, 2 * p) {
                // [c_{k_1}, [ .. [c_{k_{2p}}, X + Y] .. ]]
                let mut inner = ad(&c[comp[2 * p - 1] - 1], &xpy);
                for j in (0..2 * p - 1).rev() {
                    inner = ad(&c[comp[j] - 1], &inner);
                }
                sum = sum.add(&inner);
            }
            rhs = rhs.add(&sum.scale(coeff));
            p += 1;
        }
        c.push(rhs.scale(1.0 / (n as f64 + 1.0)));
    }
    Ok(c)
}

/// Left fold of [`bch`] over a nonempty list; a single element is returned
/// unchanged.
pub fn bch_chain(xs: &[AlgebraElement], order: usize) -> Result<AlgebraElement> {
    if order < 1 {
        return Err(Error::InvalidOrder(order));
    }
    let mut iter = xs.iter();
    let mut z = *iter.next().expect("bch_chain needs a nonempty list");
    for x in iter {
        z = bch(&z, x, order)?;
    }
    Ok(z)
}

/// Truncated `dexp^{-1}`-style operator: the series
/// `(1 - e^{-ad_X})/ad_X` applied to `Y`, summed as
/// `sum_{k=0..order} (-1)^k/(k+1)! ad_X^k(Y)`.
///
/// `exp(X) * dexp(X, Y, order)` approximates the directional derivative
/// `d/dtau exp(X + tau Y)` at `tau = 0`.
pub fn dexp(x: &AlgebraElement, y: &AlgebraElement, order: usize) -> Result<AlgebraElement> {
    if order < 1 {
        return Err(Error::InvalidOrder(order));
    }
    let mut acc = *y;
    let mut ad_pow = *y;
    // coeff follows (-1)^k/(k+1)! through c_k = -c_{k-1}/(k+1).
    let mut coeff = 1.0;
    for k in 1..=order {
        ad_pow = ad(x, &ad_pow);
        coeff *= -1.0 / (k as f64 + 1.0);
        acc = acc.add(&ad_pow.scale(coeff));
    }
    Ok(acc)
}

/// BCH fold where every input carries a direction, propagated in
/// forward mode: returns `(Z, dZ)` for inputs `X_i + tau X'_i` at
/// `tau = 0`. All BCH operations are linear or bilinear, so the dual
/// part follows the product rule through the same recursion.
pub fn bch_chain_with_direction(
    xs: &[(AlgebraElement, AlgebraElement)],
    order: usize,
) -> Result<(AlgebraElement, AlgebraElement)> {
    if order < 1 {
        return Err(Error::InvalidOrder(order));
    }
    let mut iter = xs.iter();
    let mut z = *iter.next().expect("bch_chain needs a nonempty list");
    for x in iter {
        z = bch_dual(&z, x, order)?;
    }
    Ok(z)
}

type Dual = (AlgebraElement, AlgebraElement);

fn ad_dual(x: &Dual, y: &Dual) -> Dual {
    (ad(&x.0, &y.0), ad(&x.1, &y.0).add(&ad(&x.0, &y.1)))
}

fn add_dual(x: &Dual, y: &Dual) -> Dual {
    (x.0.add(&y.0), x.1.add(&y.1))
}

fn scale_dual(x: &Dual, s: f64) -> Dual {
    (x.0.scale(s), x.1.scale(s))
}

fn bch_dual(x: &Dual, y: &Dual, order: usize) -> Result<Dual> {
    if order < 1 {
        return Err(Error::InvalidOrder(order));
    }
    let xpy = add_dual(x, y);
    let xmy = (x.0.sub(&y.0), x.1.sub(&y.1));
    let mut c: Vec<Dual> = Vec::with_capacity(order);
    c.push(xpy);
    for n in 1..order {
        let mut rhs = scale_dual(&ad_dual(&xmy, &c[n - 1]), 0.5);
        let mut p = 1;
        while 2 * p <= n {
            let coeff = BERNOULLI_EVEN[p - 1] / factorial(2 * p);
            let mut sum = (AlgebraElement::ZERO, AlgebraElement::ZERO);
            for comp in compositions(n, 2 * p) {
                let mut inner = ad_dual(&c[comp[2 * p - 1] - 1], &xpy);
                for j in (0..2 * p - 1).rev() {
                    inner = ad_dual(&c[comp[j] - 1], &inner);
                }
                sum = add_dual(&sum, &inner);
            }
            rhs = add_dual(&rhs, &scale_dual(&sum, coeff));
            p += 1;
        }
        c.push(scale_dual(&rhs, 1.0 / (n as f64 + 1.0)));
    }
    let mut z = (AlgebraElement::ZERO, AlgebraElement::ZERO);
    for t in &c {
        z = add_dual(&z, t);
    }
    Ok(z)
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

/// All compositions of `n` into exactly `parts` positive integers.
fn compositions(n: usize, parts: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(parts);
    fn rec(n: usize, parts: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if parts == 1 {
            if n >= 1 {
                cur.push(n);
                out.push(cur.clone());
                cur.pop();
            }
            return;
        }
        for k in 1..=(n + 1 - parts) {
            cur.push(k);
            rec(n - k, parts - 1, cur, out);
            cur.pop();
        }
    }
    if parts >= 1 && n >= parts {
        rec(n, parts, &mut cur, &mut out);
    }
    out
}
