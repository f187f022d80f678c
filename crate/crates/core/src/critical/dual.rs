//! Forward-mode dual numbers and the scalar abstraction used to evaluate
//! Plücker polynomials with exact directional derivatives.

use std::ops::{Add, Div, Mul, Neg, Sub};

/// Field operations plus the two transcendental functions the chart needs.
pub trait Scalar:
    Copy + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> + Div<Output = Self> + Neg<Output = Self>
{
    fn cst(x: f64) -> Self;
    fn re(self) -> f64;
    fn sin(self) -> Self;
    fn cos(self) -> Self;
}

impl Scalar for f64 {
    fn cst(x: f64) -> Self {
        x
    }
    fn re(self) -> f64 {
        self
    }
    fn sin(self) -> Self {
        f64::sin(self)
    }
    fn cos(self) -> Self {
        f64::cos(self)
    }
}

/// `re + eps * e` with `e^2 = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Dual {
    pub re: f64,
    pub eps: f64,
}

impl Dual {
    pub fn new(re: f64, eps: f64) -> Dual {
        Dual { re, eps }
    }
}

impl Add for Dual {
    type Output = Dual;
    fn add(self, o: Dual) -> Dual {
        Dual::new(self.re + o.re, self.eps + o.eps)
    }
}

impl Sub for Dual {
    type Output = Dual;
    fn sub(self, o: Dual) -> Dual {
        Dual::new(self.re - o.re, self.eps - o.eps)
    }
}

impl Mul for Dual {
    type Output = Dual;
    fn mul(self, o: Dual) -> Dual {
        Dual::new(self.re * o.re, self.re * o.eps + self.eps * o.re)
    }
}

impl Div for Dual {
    type Output = Dual;
    fn div(self, o: Dual) -> Dual {
        Dual::new(self.re / o.re, (self.eps * o.re - self.re * o.eps) / (o.re * o.re))
    }
}

impl Neg for Dual {
    type Output = Dual;
    fn neg(self) -> Dual {
        Dual::new(-self.re, -self.eps)
    }
}

impl Scalar for Dual {
    fn cst(x: f64) -> Self {
        Dual::new(x, 0.0)
    }
    fn re(self) -> f64 {
        self.re
    }
    fn sin(self) -> Self {
        Dual::new(self.re.sin(), self.eps * self.re.cos())
    }
    fn cos(self) -> Self {
        Dual::new(self.re.cos(), -self.eps * self.re.sin())
    }
}

/// Integer power by repeated squaring.
pub fn powi<T: Scalar>(x: T, mut e: usize) -> T {
    let mut base = x;
    let mut acc = T::cst(1.0);
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base;
        }
        base = base * base;
        e >>= 1;
    }
    acc
}

/// Determinant of a `k x k` matrix given row-major, by cofactor expansion
/// (division free, so derivatives stay exact at singular matrices).
pub fn det<T: Scalar>(m: &[T], k: usize) -> T {
    match k {
        0 => T::cst(1.0),
        1 => m[0],
        2 => m[0] * m[3] - m[1] * m[2],
        _ => {
            let mut acc = T::cst(0.0);
            let mut minor = Vec::with_capacity((k - 1) * (k - 1));
            for c in 0..k {
                minor.clear();
                for r in 1..k {
                    for cc in 0..k {
                        if cc != c {
                            minor.push(m[r * k + cc]);
                        }
                    }
                }
                let term = m[c] * det(&minor, k - 1);
                acc = if c % 2 == 0 { acc + term } else { acc - term };
            }
            acc
        }
    }
}

/// All `k x k` minors of an `n x k` matrix (row-major), rows chosen from `subsets`.
pub fn minors_of<T: Scalar>(y: &[T], k: usize, subsets: &[Vec<usize>]) -> Vec<T> {
    let mut buf = Vec::with_capacity(k * k);
    subsets
        .iter()
        .map(|rows| {
            buf.clear();
            for &r in rows {
                buf.extend_from_slice(&y[r * k..(r + 1) * k]);
            }
            det(&buf, k)
        })
        .collect()
}
