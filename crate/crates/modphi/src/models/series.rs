use crate::error::{Error, Result};
use num_traits::{FromPrimitive, Num};
use std::ops::{Add, Mul};

/// Power series truncated at a fixed order (coefficients of t^0..=t^order).
#[derive(Clone, Debug, PartialEq)]
pub struct Series<T> {
    coeffs: Vec<T>,
}

fn from_usize<T: FromPrimitive>(n: usize) -> T {
    T::from_usize(n).expect("coefficient ring must hold small integers")
}

impl<T: Clone + Num + FromPrimitive> Series<T> {
    /// Coefficients beyond `order` are dropped, missing ones are zero.
    pub fn new(mut coeffs: Vec<T>, order: usize) -> Self {
        coeffs.resize(order + 1, T::zero());
        Self { coeffs }
    }

    pub fn zero(order: usize) -> Self {
        Self::new(vec![], order)
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn coeff(&self, n: usize) -> T {
        self.coeffs.get(n).cloned().unwrap_or_else(T::zero)
    }

    pub fn scale(&self, c: &T) -> Self {
        Self { coeffs: self.coeffs.iter().map(|a| a.clone() * c.clone()).collect() }
    }

    /// exp(f) for f(0) = 0, via n b_n = Σ_{k=1}^n k a_k b_{n−k}.
    pub fn exp(&self) -> Result<Self> {
        if !self.coeffs[0].is_zero() {
            return Err(Error::Invalid("exp needs a zero constant term".into()));
        }
        let m = self.order();
        let ka: Vec<T> = (0..=m).map(|k| self.coeffs[k].clone() * from_usize(k)).collect();
        let mut b = vec![T::one()];
        for n in 1..=m {
            let mut s = T::zero();
            for k in 1..=n {
                s = s + ka[k].clone() * b[n - k].clone();
            }
            b.push(s / from_usize(n));
        }
        Ok(Self { coeffs: b })
    }

    /// log(f) for f(0) = 1, via n g_n = n f_n − Σ_{k=1}^{n−1} k g_k f_{n−k}.
    pub fn log(&self) -> Result<Self> {
        if !self.coeffs[0].is_one() {
            return Err(Error::Invalid("log needs constant term 1".into()));
        }
        let m = self.order();
        let mut g = vec![T::zero(); m + 1];
        for n in 1..=m {
            let mut s = self.coeffs[n].clone() * from_usize(n);
            for k in 1..n {
                s = s - g[k].clone() * from_usize(k) * self.coeffs[n - k].clone();
            }
            g[n] = s / from_usize(n);
        }
        Ok(Self { coeffs: g })
    }
}

impl<T: Clone + Num + FromPrimitive> Add for &Series<T> {
    type Output = Series<T>;
    fn add(self, rhs: &Series<T>) -> Series<T> {
        let m = self.order().min(rhs.order());
        Series { coeffs: (0..=m).map(|i| self.coeffs[i].clone() + rhs.coeffs[i].clone()).collect() }
    }
}

impl<T: Clone + Num + FromPrimitive> Mul for &Series<T> {
    type Output = Series<T>;
    fn mul(self, rhs: &Series<T>) -> Series<T> {
        let m = self.order().min(rhs.order());
        let coeffs = (0..=m)
            .map(|n| (0..=n).fold(T::zero(), |acc, k| acc + self.coeffs[k].clone() * rhs.coeffs[n - k].clone()))
            .collect();
        Series { coeffs }
    }
}
