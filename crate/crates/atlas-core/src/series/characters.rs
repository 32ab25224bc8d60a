//! Dirichlet characters modulo q for cyclic (Z/qZ)*, enumerated as powers of
//! a fixed primitive root: character j sends the root g to e^{2 pi i j / phi(q)}.

use num_complex::Complex64;

use crate::error::EvalError;

#[derive(Debug, Clone, PartialEq)]
pub struct DirichletCharacter {
    pub modulus: u32,
    pub index: u32,
    pub phi: u32,
    pub root: u32,
    /// chi(n) for n in 0..q (zero when gcd(n, q) > 1).
    values: Vec<Complex64>,
}

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn euler_phi(q: u32) -> u32 {
    (1..=q).filter(|&n| gcd(n, q) == 1).count() as u32
}

fn mul_order(a: u32, q: u32) -> u32 {
    let mut x = a % q;
    let mut k = 1;
    while x != 1 {
        x = (x as u64 * a as u64 % q as u64) as u32;
        k += 1;
        if k > q {
            return 0;
        }
    }
    k
}

/// Smallest primitive root mod q, or None when (Z/qZ)* is not cyclic.
pub fn primitive_root(q: u32) -> Option<u32> {
    let phi = euler_phi(q);
    (2..q).find(|&g| gcd(g, q) == 1 && mul_order(g, q) == phi)
}

impl DirichletCharacter {
    pub fn new(modulus: u32, index: u32) -> Result<Self, EvalError> {
        if modulus < 3 {
            return Err(EvalError::InvalidSpec(format!(
                "character modulus must be at least 3, got {modulus}"
            )));
        }
        let phi = euler_phi(modulus);
        if index >= phi {
            return Err(EvalError::InvalidSpec(format!(
                "character index {index} out of range for modulus {modulus} (phi = {phi})"
            )));
        }
        let root = primitive_root(modulus).ok_or_else(|| {
            EvalError::InvalidSpec(format!("(Z/{modulus}Z)* is not cyclic; no primitive root"))
        })?;
        // Discrete logs: dlog[g^m mod q] = m.
        let mut dlog = vec![u32::MAX; modulus as usize];
        let mut x = 1u64;
        for m in 0..phi {
            dlog[x as usize] = m;
            x = x * root as u64 % modulus as u64;
        }
        let values = (0..modulus)
            .map(|n| {
                if gcd(n, modulus) != 1 {
                    Complex64::new(0.0, 0.0)
                } else {
                    let m = dlog[n as usize];
                    let theta = 2.0 * std::f64::consts::PI * (index as f64) * (m as f64)
                        / phi as f64;
                    Complex64::new(theta.cos(), theta.sin())
                }
            })
            .collect();
        Ok(DirichletCharacter {
            modulus,
            index,
            phi,
            root,
            values,
        })
    }

    #[inline]
    pub fn eval(&self, n: u64) -> Complex64 {
        self.values[(n % self.modulus as u64) as usize]
    }

    pub fn is_principal(&self) -> bool {
        self.index == 0
    }

    /// chi(-1) = 1 for even characters, -1 for odd ones.
    pub fn is_even(&self) -> bool {
        let v = self.eval(self.modulus as u64 - 1);
        (v - Complex64::new(1.0, 0.0)).norm() < 1e-12
    }

    /// Gauss sum tau(chi) = sum_n chi(n) e^{2 pi i n / q}.
    pub fn gauss_sum(&self) -> Complex64 {
        let q = self.modulus as u64;
        let mut tau = Complex64::new(0.0, 0.0);
        for n in 1..q {
            let theta = 2.0 * std::f64::consts::PI * n as f64 / q as f64;
            tau += self.eval(n) * Complex64::new(theta.cos(), theta.sin());
        }
        tau
    }

    /// Root number eps(chi) = tau(chi) / (i^a sqrt q) with a = 0 (even) or
    /// 1 (odd); has modulus 1 for primitive characters.
    pub fn root_number(&self) -> Complex64 {
        let a = if self.is_even() { 0 } else { 1 };
        let denom = if a == 0 {
            Complex64::new((self.modulus as f64).sqrt(), 0.0)
        } else {
            Complex64::new(0.0, (self.modulus as f64).sqrt())
        };
        self.gauss_sum() / denom
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mod5_root_is_two() {
        let chi = DirichletCharacter::new(5, 1).unwrap();
        assert_eq!(chi.root, 2);
        assert_eq!(chi.phi, 4);
        // chi_1(2) = i
        assert!((chi.eval(2) - Complex64::new(0.0, 1.0)).norm() < 1e-14);
    }

    #[test]
    fn characters_are_multiplicative() {
        for q in [5u32, 7, 9, 11] {
            let phi = euler_phi(q);
            for j in 0..phi {
                let chi = DirichletCharacter::new(q, j).unwrap();
                for a in 1..q as u64 {
                    for b in 1..q as u64 {
                        let lhs = chi.eval(a * b);
                        let rhs = chi.eval(a) * chi.eval(b);
                        assert!((lhs - rhs).norm() < 1e-12);
                    }
                }
            }
        }
    }

    #[test]
    fn orthogonality_of_value_sums() {
        // Non-principal characters sum to zero over a period.
        for j in 1..6 {
            let chi = DirichletCharacter::new(7, j).unwrap();
            let total: Complex64 = (0..7).map(|n| chi.eval(n)).sum();
            assert!(total.norm() < 1e-12, "index {j} sums to {total}");
        }
    }

    #[test]
    fn rejects_non_cyclic_modulus() {
        assert!(DirichletCharacter::new(8, 1).is_err());
        assert!(DirichletCharacter::new(12, 1).is_err());
    }
}
