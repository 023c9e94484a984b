//! Truncated bivariate Taylor jets.
//!
//! A [`Jet`] holds the raw partial derivatives `∂^{i+j} f / ∂x^i ∂y^j` of a
//! scalar function at a base point for every `i + j <= order`. Coefficients
//! are *not* divided by factorials, so `get(2, 0)` is `f_xx` itself.
//!
//! Arithmetic follows the general Leibniz rule; univariate functions are
//! applied by Faà di Bruno composition through the Taylor series of the outer
//! function.

use std::ops::{Add, AddAssign, Mul, Neg, Sub};

/// Highest derivative order a jet can carry.
pub const MAX_ORDER: usize = 6;

const W: usize = MAX_ORDER + 1;

const BINOMIAL: [[f64; W]; W] = {
    let mut t = [[0.0; W]; W];
    let mut n = 0;
    while n < W {
        t[n][0] = 1.0;
        let mut k = 1;
        while k <= n {
            t[n][k] = t[n - 1][k - 1] + if k < n { t[n - 1][k] } else { 0.0 };
            k += 1;
        }
        n += 1;
    }
    t
};

const FACTORIAL: [f64; W] = [1.0, 1.0, 2.0, 6.0, 24.0, 120.0, 720.0];

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Jet {
    order: usize,
    c: [[f64; W]; W],
}

impl Jet {
    pub fn zero(order: usize) -> Self {
        assert!(order <= MAX_ORDER, "jet order {order} exceeds {MAX_ORDER}");
        Jet {
            order,
            c: [[0.0; W]; W],
        }
    }

    /// A constant, valid at every order.
    pub fn constant(value: f64) -> Self {
        let mut j = Jet::zero(MAX_ORDER);
        j.c[0][0] = value;
        j
    }

    pub fn constant_with_order(value: f64, order: usize) -> Self {
        let mut j = Jet::zero(order);
        j.c[0][0] = value;
        j
    }

    /// The coordinate function `x` expanded at `x0`.
    pub fn var_x(x0: f64, order: usize) -> Self {
        let mut j = Jet::zero(order);
        j.c[0][0] = x0;
        if order >= 1 {
            j.c[1][0] = 1.0;
        }
        j
    }

    pub fn var_y(y0: f64, order: usize) -> Self {
        let mut j = Jet::zero(order);
        j.c[0][0] = y0;
        if order >= 1 {
            j.c[0][1] = 1.0;
        }
        j
    }

    /// Builds a jet from a closure giving the raw derivative for each `(i, j)`.
    pub fn from_fn(order: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut jet = Jet::zero(order);
        for i in 0..=order {
            for j in 0..=order - i {
                jet.c[i][j] = f(i, j);
            }
        }
        jet
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.c[0][0]
    }

    /// Raw derivative `∂^{i+j}/∂x^i∂y^j`. Panics when `i + j` exceeds the order.
    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        assert!(
            i + j <= self.order,
            "derivative ({i},{j}) beyond jet order {}",
            self.order
        );
        self.c[i][j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        assert!(i + j <= self.order);
        self.c[i][j] = v;
    }

    /// Number of stored coefficients, `(order+1)(order+2)/2`.
    pub fn len(&self) -> usize {
        (self.order + 1) * (self.order + 2) / 2
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn truncate(&self, order: usize) -> Jet {
        assert!(order <= self.order, "cannot raise jet order by truncation");
        let mut out = *self;
        out.order = order;
        for i in 0..W {
            for j in 0..W {
                if i + j > order {
                    out.c[i][j] = 0.0;
                }
            }
        }
        out
    }

    /// Partial derivative in `x`; the result loses one order.
    pub fn dx(&self) -> Jet {
        assert!(self.order >= 1, "cannot differentiate an order-0 jet");
        Jet::from_fn(self.order - 1, |i, j| self.c[i + 1][j])
    }

    pub fn dy(&self) -> Jet {
        assert!(self.order >= 1, "cannot differentiate an order-0 jet");
        Jet::from_fn(self.order - 1, |i, j| self.c[i][j + 1])
    }

    pub fn scale(&self, s: f64) -> Jet {
        let mut out = *self;
        for row in out.c.iter_mut() {
            for v in row.iter_mut() {
                *v *= s;
            }
        }
        out
    }

    /// Largest absolute coefficient.
    pub fn max_abs(&self) -> f64 {
        let mut m: f64 = 0.0;
        for i in 0..=self.order {
            for j in 0..=self.order - i {
                m = m.max(self.c[i][j].abs());
            }
        }
        m
    }

    pub fn is_finite(&self) -> bool {
        (0..=self.order).all(|i| (0..=self.order - i).all(|j| self.c[i][j].is_finite()))
    }

    /// Evaluates the Taylor polynomial at the offset `(dx, dy)` from the base point.
    pub fn taylor(&self, dx: f64, dy: f64) -> f64 {
        let mut s = 0.0;
        for i in 0..=self.order {
            for j in 0..=self.order - i {
                s += self.c[i][j] * dx.powi(i as i32) * dy.powi(j as i32)
                    / (FACTORIAL[i] * FACTORIAL[j]);
            }
        }
        s
    }

    /// Homogeneous Taylor part of degree `k`, as coefficients of `x^{k-j} y^j` for `j = 0..=k`.
    pub fn homogeneous_part(&self, k: usize) -> Vec<f64> {
        assert!(k <= self.order);
        (0..=k)
            .map(|j| self.c[k - j][j] / (FACTORIAL[k - j] * FACTORIAL[j]))
            .collect()
    }

    /// Composes the Taylor polynomial of `self` (variables are offsets from the
    /// base point) with the jets `u`, `v` of the offsets. The constant terms of
    /// `u` and `v` are used as offsets, so pass jets with zero value to
    /// re-expand at the same base point.
    pub fn compose(&self, u: &Jet, v: &Jet) -> Jet {
        let order = self.order.min(u.order).min(v.order);
        let mut upow = [Jet::constant_with_order(1.0, order); W];
        let mut vpow = [Jet::constant_with_order(1.0, order); W];
        for k in 1..=self.order {
            upow[k] = upow[k - 1] * *u;
            vpow[k] = vpow[k - 1] * *v;
        }
        let mut out = Jet::zero(order);
        for i in 0..=self.order {
            for j in 0..=self.order - i {
                let coef = self.c[i][j] / (FACTORIAL[i] * FACTORIAL[j]);
                if coef != 0.0 {
                    out += (upow[i] * vpow[j]).scale(coef);
                }
            }
        }
        out
    }

    /// Applies a univariate function given its derivatives `h(f0), h'(f0), ..., h^{(n)}(f0)`.
    pub fn apply(&self, derivs: &[f64]) -> Jet {
        let order = self.order;
        assert!(derivs.len() > order);
        let mut u = *self;
        u.c[0][0] = 0.0;
        let mut out = Jet::constant_with_order(derivs[0], order);
        let mut upow = Jet::constant_with_order(1.0, order);
        for (k, d) in derivs.iter().enumerate().take(order + 1).skip(1) {
            upow = upow * u;
            out += upow.scale(d / FACTORIAL[k]);
        }
        out
    }

    pub fn recip(&self) -> Jet {
        let t = self.value();
        let mut d = [0.0; W];
        let mut sign = 1.0;
        for (k, dk) in d.iter_mut().enumerate() {
            *dk = sign * FACTORIAL[k] / t.powi(k as i32 + 1);
            sign = -sign;
        }
        self.apply(&d)
    }

    pub fn sqrt(&self) -> Jet {
        let t = self.value();
        let mut d = [0.0; W];
        let mut coef = 1.0;
        let mut expo = 0.5;
        for dk in d.iter_mut() {
            *dk = coef * t.powf(expo);
            coef *= expo;
            expo -= 1.0;
        }
        self.apply(&d)
    }

    pub fn exp(&self) -> Jet {
        let e = self.value().exp();
        self.apply(&[e; W])
    }

    pub fn sin(&self) -> Jet {
        let (s, c) = self.value().sin_cos();
        self.apply(&[s, c, -s, -c, s, c, -s])
    }

    pub fn cos(&self) -> Jet {
        let (s, c) = self.value().sin_cos();
        self.apply(&[c, -s, -c, s, c, -s, -c])
    }

    /// Integer power by repeated multiplication; negative exponents go through [`Jet::recip`].
    pub fn powi(&self, n: i32) -> Jet {
        if n < 0 {
            return self.powi(-n).recip();
        }
        let mut result = Jet::constant_with_order(1.0, self.order);
        let mut base = *self;
        let mut e = n as u32;
        while e > 0 {
            if e & 1 == 1 {
                result = result * base;
            }
            e >>= 1;
            if e > 0 {
                base = base * base;
            }
        }
        result
    }
}

impl Add for Jet {
    type Output = Jet;
    fn add(self, rhs: Jet) -> Jet {
        let order = self.order.min(rhs.order);
        Jet::from_fn(order, |i, j| self.c[i][j] + rhs.c[i][j])
    }
}

impl AddAssign for Jet {
    fn add_assign(&mut self, rhs: Jet) {
        *self = *self + rhs;
    }
}

impl Sub for Jet {
    type Output = Jet;
    fn sub(self, rhs: Jet) -> Jet {
        let order = self.order.min(rhs.order);
        Jet::from_fn(order, |i, j| self.c[i][j] - rhs.c[i][j])
    }
}

impl Neg for Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        self.scale(-1.0)
    }
}

impl Mul for Jet {
    type Output = Jet;
    fn mul(self, rhs: Jet) -> Jet {
        let order = self.order.min(rhs.order);
        let mut out = Jet::zero(order);
        for i in 0..=order {
            for j in 0..=order - i {
                let mut s = 0.0;
                for k in 0..=i {
                    for l in 0..=j {
                        let a = self.c[k][l];
                        if a != 0.0 {
                            s += BINOMIAL[i][k] * BINOMIAL[j][l] * a * rhs.c[i - k][j - l];
                        }
                    }
                }
                out.c[i][j] = s;
            }
        }
        out
    }
}

impl Mul<f64> for Jet {
    type Output = Jet;
    fn mul(self, rhs: f64) -> Jet {
        self.scale(rhs)
    }
}

impl Add<f64> for Jet {
    type Output = Jet;
    fn add(mut self, rhs: f64) -> Jet {
        self.c[0][0] += rhs;
        self
    }
}
