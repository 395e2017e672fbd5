//! Finite fields GF(p^k) for q = p^k ≤ 64, built from log/antilog tables.
//!
//! Elements are encoded as integers `0..q`: the base-`p` digits of an index
//! are the coefficients (lowest degree first) of its polynomial
//! representative modulo the defining polynomial. Index 0 is zero and index
//! 1 is one.

use crate::error::{QacError, Result};

/// Largest field order supported.
pub const MAX_ORDER: usize = 64;

/// Defining polynomials for the non-prime fields, as `(p, k, [f_0, …, f_{k-1}])`
/// for the monic polynomial `x^k + f_{k-1}x^{k-1} + … + f_0`. These are the
/// Conway polynomials, so `x` generates the multiplicative group.
const DEFINING_POLYNOMIALS: &[(usize, usize, &[usize])] = &[
    (2, 2, &[1, 1]),             // x^2 + x + 1
    (2, 3, &[1, 1, 0]),          // x^3 + x + 1
    (2, 4, &[1, 1, 0, 0]),       // x^4 + x + 1
    (2, 5, &[1, 0, 1, 0, 0]),    // x^5 + x^2 + 1
    (2, 6, &[1, 1, 0, 1, 1, 0]), // x^6 + x^4 + x^3 + x + 1
    (3, 2, &[2, 2]),             // x^2 + 2x + 2
    (3, 3, &[1, 2, 0]),          // x^3 + 2x + 1
    (5, 2, &[2, 4]),             // x^2 + 4x + 2
    (7, 2, &[3, 6]),             // x^2 + 6x + 3
];

/// Splits `q` into `(p, k)` with `q = p^k`, `p` prime, `k ≥ 1`.
pub fn prime_power(q: usize) -> Option<(usize, usize)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|&f| q % f == 0)?;
    let mut rest = q;
    let mut k = 0;
    while rest % p == 0 {
        rest /= p;
        k += 1;
    }
    (rest == 1).then_some((p, k))
}

fn smallest_primitive_root(p: usize) -> usize {
    if p == 2 {
        return 1;
    }
    (2..p)
        .find(|&g| {
            let mut x = 1;
            (1..p - 1).all(|_| {
                x = x * g % p;
                x != 1
            })
        })
        .expect("every prime has a primitive root")
}

#[derive(Debug, Clone)]
pub struct GaloisField {
    p: usize,
    k: usize,
    q: usize,
    /// `exp[i]` is the index of `x^i`, for `i` in `0..q-1`.
    exp: Vec<usize>,
    /// Discrete log of each nonzero element; `log[0]` is unused.
    log: Vec<usize>,
    trace: Vec<usize>,
}

impl GaloisField {
    pub fn new(q: usize) -> Result<Self> {
        let (p, k) = prime_power(q).ok_or(QacError::NotPrimePower(q))?;
        if q > MAX_ORDER {
            return Err(QacError::InvalidArgument(format!("field order {q} exceeds {MAX_ORDER}")));
        }
        let reduction: Vec<usize> = if k == 1 {
            // x ≡ g for a primitive root g, i.e. the polynomial x - g
            vec![(p - smallest_primitive_root(p)) % p]
        } else {
            DEFINING_POLYNOMIALS
                .iter()
                .find(|(pp, kk, _)| *pp == p && *kk == k)
                .map(|(_, _, f)| f.to_vec())
                .ok_or_else(|| QacError::InvalidArgument(format!("no defining polynomial for GF({p}^{k})")))?
        };

        let mut exp = Vec::with_capacity(q - 1);
        let mut log = vec![usize::MAX; q];
        let mut coeffs = vec![0usize; k];
        coeffs[0] = 1;
        for i in 0..q - 1 {
            let idx = Self::encode(&coeffs, p);
            if log[idx] != usize::MAX {
                return Err(QacError::InvalidArgument(format!("defining polynomial for GF({q}) is not primitive")));
            }
            log[idx] = i;
            exp.push(idx);
            // multiply by x: shift, then reduce x^k = -Σ f_i x^i
            let top = coeffs[k - 1];
            for j in (1..k).rev() {
                coeffs[j] = coeffs[j - 1];
            }
            coeffs[0] = 0;
            for j in 0..k {
                coeffs[j] = (coeffs[j] + (p - reduction[j]) * top) % p;
            }
        }

        let mut field = Self { p, k, q, exp, log, trace: Vec::new() };
        field.trace = (0..q).map(|x| field.compute_trace(x)).collect::<Result<_>>()?;
        field.check_axioms()?;
        Ok(field)
    }

    fn encode(coeffs: &[usize], p: usize) -> usize {
        coeffs.iter().rev().fold(0, |acc, &c| acc * p + c)
    }

    pub fn characteristic(&self) -> usize {
        self.p
    }

    pub fn degree(&self) -> usize {
        self.k
    }

    pub fn order(&self) -> usize {
        self.q
    }

    pub fn add(&self, a: usize, b: usize) -> usize {
        let (mut a, mut b) = (a, b);
        let mut out = 0;
        let mut place = 1;
        for _ in 0..self.k {
            out += ((a % self.p + b % self.p) % self.p) * place;
            a /= self.p;
            b /= self.p;
            place *= self.p;
        }
        out
    }

    pub fn neg(&self, a: usize) -> usize {
        let mut a = a;
        let mut out = 0;
        let mut place = 1;
        for _ in 0..self.k {
            out += ((self.p - a % self.p) % self.p) * place;
            a /= self.p;
            place *= self.p;
        }
        out
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        if a == 0 || b == 0 {
            return 0;
        }
        self.exp[(self.log[a] + self.log[b]) % (self.q - 1)]
    }

    pub fn inv(&self, a: usize) -> Option<usize> {
        (a != 0).then(|| self.exp[(self.q - 1 - self.log[a]) % (self.q - 1)])
    }

    pub fn pow(&self, a: usize, e: usize) -> usize {
        if e == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        self.exp[(self.log[a] * e) % (self.q - 1)]
    }

    /// Absolute trace `x + x^p + … + x^{p^{k-1}}`, as an integer in `0..p`.
    pub fn trace(&self, a: usize) -> usize {
        self.trace[a]
    }

    fn compute_trace(&self, a: usize) -> Result<usize> {
        let mut acc = 0;
        let mut power = 1;
        for _ in 0..self.k {
            acc = self.add(acc, self.pow(a, power));
            power *= self.p;
        }
        if acc >= self.p {
            return Err(QacError::InvalidArgument(format!("trace of {a} left the prime subfield")));
        }
        Ok(acc)
    }

    /// Exhaustive check of the field axioms over all element triples.
    fn check_axioms(&self) -> Result<()> {
        let q = self.q;
        let fail = |what: &str| Err(QacError::InvalidArgument(format!("GF({q}) table violates {what}")));
        for a in 0..q {
            if self.add(a, 0) != a || self.mul(a, 1) != a {
                return fail("identity");
            }
            if self.add(a, self.neg(a)) != 0 {
                return fail("additive inverse");
            }
            if a != 0 && self.mul(a, self.inv(a).unwrap()) != 1 {
                return fail("multiplicative inverse");
            }
            for b in 0..q {
                if self.add(a, b) != self.add(b, a) || self.mul(a, b) != self.mul(b, a) {
                    return fail("commutativity");
                }
                for c in 0..q {
                    if self.add(self.add(a, b), c) != self.add(a, self.add(b, c)) {
                        return fail("additive associativity");
                    }
                    if self.mul(self.mul(a, b), c) != self.mul(a, self.mul(b, c)) {
                        return fail("multiplicative associativity");
                    }
                    if self.mul(a, self.add(b, c)) != self.add(self.mul(a, b), self.mul(a, c)) {
                        return fail("distributivity");
                    }
                }
            }
        }
        Ok(())
    }
}
