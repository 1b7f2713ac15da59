//! Exact arithmetic in the Euclidean domains underlying semilocal PIDs and
//! residue rings: the integers and polynomials over a prime field.
//!
//! Integer arithmetic is checked; overflow aborts with a panic whose message
//! starts with [`OVERFLOW`] instead of wrapping.

use crate::element::AmbVal;

pub const OVERFLOW: &str = "arithmetic overflow";

/// Largest magnitude accepted for declared integer parameters (moduli, primes).
pub const MAX_DECLARED_INT: i64 = 1 << 20;
/// Largest characteristic accepted for polynomial ambients.
pub const MAX_CHARACTERISTIC: u32 = 1 << 15;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Ambient {
    Integers,
    /// Polynomials in `t` over the field with `p` elements.
    Poly(u32),
}

fn overflow() -> ! {
    panic!("{OVERFLOW} in exact integer arithmetic")
}

fn int(v: &AmbVal) -> i64 {
    match v {
        AmbVal::Int(n) => *n,
        AmbVal::Poly(_) => panic!("integer ambient given a polynomial"),
    }
}

fn poly(v: &AmbVal) -> &[u32] {
    match v {
        AmbVal::Poly(cs) => cs,
        AmbVal::Int(_) => panic!("polynomial ambient given an integer"),
    }
}

fn trim(mut cs: Vec<u32>) -> Vec<u32> {
    while cs.last() == Some(&0) {
        cs.pop();
    }
    cs
}

pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    r
}

impl Ambient {
    pub fn zero(&self) -> AmbVal {
        match self {
            Ambient::Integers => AmbVal::Int(0),
            Ambient::Poly(_) => AmbVal::Poly(vec![]),
        }
    }

    pub fn one(&self) -> AmbVal {
        self.from_int(1)
    }

    pub fn from_int(&self, n: i64) -> AmbVal {
        match self {
            Ambient::Integers => AmbVal::Int(n),
            Ambient::Poly(p) => AmbVal::Poly(trim(vec![n.rem_euclid(*p as i64) as u32])),
        }
    }

    /// The variable `t`; only meaningful for polynomial ambients.
    pub fn variable(&self) -> AmbVal {
        match self {
            Ambient::Integers => panic!("integers have no variable"),
            Ambient::Poly(_) => AmbVal::Poly(vec![0, 1]),
        }
    }

    pub fn is_zero(&self, a: &AmbVal) -> bool {
        match a {
            AmbVal::Int(n) => *n == 0,
            AmbVal::Poly(cs) => cs.is_empty(),
        }
    }

    pub fn validate(&self, a: &AmbVal) -> bool {
        match (self, a) {
            (Ambient::Integers, AmbVal::Int(_)) => true,
            (Ambient::Poly(p), AmbVal::Poly(cs)) => {
                cs.last() != Some(&0) && cs.iter().all(|c| c < p)
            }
            _ => false,
        }
    }

    pub fn add(&self, a: &AmbVal, b: &AmbVal) -> AmbVal {
        match self {
            Ambient::Integers => {
                AmbVal::Int(int(a).checked_add(int(b)).unwrap_or_else(|| overflow()))
            }
            Ambient::Poly(p) => {
                let (x, y) = (poly(a), poly(b));
                let n = x.len().max(y.len());
                let cs = (0..n)
                    .map(|i| {
                        let s = *x.get(i).unwrap_or(&0) as u64 + *y.get(i).unwrap_or(&0) as u64;
                        (s % *p as u64) as u32
                    })
                    .collect();
                AmbVal::Poly(trim(cs))
            }
        }
    }

    pub fn neg(&self, a: &AmbVal) -> AmbVal {
        match self {
            Ambient::Integers => AmbVal::Int(int(a).checked_neg().unwrap_or_else(|| overflow())),
            Ambient::Poly(p) => {
                AmbVal::Poly(poly(a).iter().map(|&c| if c == 0 { 0 } else { p - c }).collect())
            }
        }
    }

    pub fn sub(&self, a: &AmbVal, b: &AmbVal) -> AmbVal {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &AmbVal, b: &AmbVal) -> AmbVal {
        match self {
            Ambient::Integers => {
                AmbVal::Int(int(a).checked_mul(int(b)).unwrap_or_else(|| overflow()))
            }
            Ambient::Poly(p) => {
                let (x, y) = (poly(a), poly(b));
                if x.is_empty() || y.is_empty() {
                    return AmbVal::Poly(vec![]);
                }
                let p = *p as u64;
                let mut cs = vec![0u64; x.len() + y.len() - 1];
                for (i, &xi) in x.iter().enumerate() {
                    for (j, &yj) in y.iter().enumerate() {
                        cs[i + j] = (cs[i + j] + xi as u64 * yj as u64) % p;
                    }
                }
                AmbVal::Poly(trim(cs.into_iter().map(|c| c as u32).collect()))
            }
        }
    }

    pub fn pow(&self, a: &AmbVal, e: u32) -> AmbVal {
        let mut r = self.one();
        for _ in 0..e {
            r = self.mul(&r, a);
        }
        r
    }

    pub fn degree(&self, a: &AmbVal) -> Option<usize> {
        match a {
            AmbVal::Int(_) => None,
            AmbVal::Poly(cs) => cs.len().checked_sub(1),
        }
    }

    /// Euclidean division with canonical remainder (nonnegative for integers).
    pub fn divrem(&self, a: &AmbVal, b: &AmbVal) -> (AmbVal, AmbVal) {
        assert!(!self.is_zero(b), "division by zero");
        match self {
            Ambient::Integers => {
                let (x, y) = (int(a), int(b));
                let r = x.checked_rem_euclid(y).unwrap_or_else(|| overflow());
                let q = (x - r) / y;
                (AmbVal::Int(q), AmbVal::Int(r))
            }
            Ambient::Poly(p) => {
                let p64 = *p as u64;
                let mut r: Vec<u32> = poly(a).to_vec();
                let d = poly(b);
                let lead_inv = pow_mod(*d.last().unwrap() as u64, p64 - 2, p64);
                if r.len() < d.len() {
                    return (AmbVal::Poly(vec![]), AmbVal::Poly(r));
                }
                let mut q = vec![0u32; r.len() - d.len() + 1];
                while r.len() >= d.len() && !r.is_empty() {
                    let shift = r.len() - d.len();
                    let c = (*r.last().unwrap() as u64 * lead_inv % p64) as u32;
                    q[shift] = c;
                    for (i, &di) in d.iter().enumerate() {
                        let sub = c as u64 * di as u64 % p64;
                        r[i + shift] = ((r[i + shift] as u64 + p64 - sub) % p64) as u32;
                    }
                    r = trim(r);
                }
                (AmbVal::Poly(trim(q)), AmbVal::Poly(r))
            }
        }
    }

    pub fn rem(&self, a: &AmbVal, m: &AmbVal) -> AmbVal {
        self.divrem(a, m).1
    }

    pub fn divides(&self, d: &AmbVal, a: &AmbVal) -> bool {
        if self.is_zero(d) {
            return self.is_zero(a);
        }
        self.is_zero(&self.rem(a, d))
    }

    /// Splits `a` into (canonical associate, unit): nonnegative integers, monic polynomials.
    pub fn canonical(&self, a: &AmbVal) -> (AmbVal, AmbVal) {
        match self {
            Ambient::Integers => {
                let n = int(a);
                if n < 0 {
                    (self.neg(a), AmbVal::Int(-1))
                } else {
                    (a.clone(), AmbVal::Int(1))
                }
            }
            Ambient::Poly(p) => {
                let cs = poly(a);
                match cs.last() {
                    None => (a.clone(), self.one()),
                    Some(&lead) => {
                        let inv = AmbVal::Poly(vec![pow_mod(lead as u64, *p as u64 - 2, *p as u64) as u32]);
                        (self.mul(a, &inv), AmbVal::Poly(vec![lead]))
                    }
                }
            }
        }
    }

    pub fn is_unit(&self, a: &AmbVal) -> bool {
        match self {
            Ambient::Integers => int(a).abs() == 1,
            Ambient::Poly(_) => poly(a).len() == 1,
        }
    }

    /// Inverse of a unit of the ambient domain.
    pub fn unit_inverse(&self, u: &AmbVal) -> AmbVal {
        match self {
            Ambient::Integers => u.clone(),
            Ambient::Poly(p) => {
                let c = poly(u)[0] as u64;
                AmbVal::Poly(vec![pow_mod(c, *p as u64 - 2, *p as u64) as u32])
            }
        }
    }

    /// Canonical gcd.
    pub fn gcd(&self, a: &AmbVal, b: &AmbVal) -> AmbVal {
        let (mut x, mut y) = (a.clone(), b.clone());
        while !self.is_zero(&y) {
            let r = self.rem(&x, &y);
            x = y;
            y = r;
        }
        self.canonical(&x).0
    }

    /// Extended gcd: returns (g, s, t) with s a + t b = g, g canonical.
    pub fn xgcd(&self, a: &AmbVal, b: &AmbVal) -> (AmbVal, AmbVal, AmbVal) {
        let (mut r0, mut r1) = (a.clone(), b.clone());
        let (mut s0, mut s1) = (self.one(), self.zero());
        let (mut t0, mut t1) = (self.zero(), self.one());
        while !self.is_zero(&r1) {
            let (q, r) = self.divrem(&r0, &r1);
            r0 = std::mem::replace(&mut r1, r);
            let s2 = self.sub(&s0, &self.mul(&q, &s1));
            s0 = std::mem::replace(&mut s1, s2);
            let t2 = self.sub(&t0, &self.mul(&q, &t1));
            t0 = std::mem::replace(&mut t1, t2);
        }
        let (g, u) = self.canonical(&r0);
        let ui = self.unit_inverse(&u);
        (g, self.mul(&s0, &ui), self.mul(&t0, &ui))
    }

    pub fn exact_div(&self, a: &AmbVal, b: &AmbVal) -> AmbVal {
        let (q, r) = self.divrem(a, b);
        debug_assert!(self.is_zero(&r));
        q
    }

    /// Inverse of `a` modulo `m`, as a canonical residue.
    pub fn mod_inverse(&self, a: &AmbVal, m: &AmbVal) -> Option<AmbVal> {
        let (g, s, _) = self.xgcd(a, m);
        if !self.is_unit(&g) {
            return None;
        }
        Some(self.rem(&s, m))
    }

    /// Multiplicity of the prime `q` in the nonzero value `a`.
    pub fn valuation(&self, a: &AmbVal, q: &AmbVal) -> u32 {
        assert!(!self.is_zero(a), "valuation of zero");
        let mut v = 0;
        let mut x = a.clone();
        loop {
            let (d, r) = self.divrem(&x, q);
            if !self.is_zero(&r) {
                return v;
            }
            x = d;
            v += 1;
        }
    }

    /// Primality test for canonical values.
    pub fn is_prime(&self, a: &AmbVal) -> bool {
        match self {
            Ambient::Integers => int(a) > 1 && is_prime_u64(int(a) as u64),
            Ambient::Poly(_) => {
                let Some(deg) = self.degree(a) else { return false };
                if deg == 0 || self.canonical(a).0 != *a {
                    return false;
                }
                (1..=deg / 2).all(|k| {
                    self.monic_of_degree(k)
                        .iter()
                        .all(|q| !self.divides(q, a))
                })
            }
        }
    }

    /// Distinct canonical prime divisors of a nonzero value.
    pub fn prime_factors(&self, a: &AmbVal) -> Vec<AmbVal> {
        let mut out = Vec::new();
        match self {
            Ambient::Integers => {
                let mut n = int(a).unsigned_abs();
                let mut d = 2u64;
                while d * d <= n {
                    if n % d == 0 {
                        out.push(AmbVal::Int(d as i64));
                        while n % d == 0 {
                            n /= d;
                        }
                    }
                    d += 1;
                }
                if n > 1 {
                    out.push(AmbVal::Int(n as i64));
                }
            }
            Ambient::Poly(_) => {
                let mut x = self.canonical(a).0;
                let mut k = 1;
                while self.degree(&x).unwrap_or(0) >= 1 {
                    if 2 * k > self.degree(&x).unwrap() {
                        out.push(x.clone());
                        break;
                    }
                    for q in self.monic_of_degree(k) {
                        if self.divides(&q, &x) && self.is_prime(&q) {
                            while self.divides(&q, &x) {
                                x = self.exact_div(&x, &q);
                            }
                            out.push(q);
                        }
                    }
                    k += 1;
                }
                out.sort();
            }
        }
        out
    }

    fn monic_of_degree(&self, k: usize) -> Vec<AmbVal> {
        let Ambient::Poly(p) = self else { return vec![] };
        let count = (*p as u64).pow(k as u32);
        (0..count)
            .map(|mut code| {
                let mut cs = Vec::with_capacity(k + 1);
                for _ in 0..k {
                    cs.push((code % *p as u64) as u32);
                    code /= *p as u64;
                }
                cs.push(1);
                AmbVal::Poly(cs)
            })
            .collect()
    }

    /// Height: absolute value for integers; the base-p code of the coefficient vector
    /// for polynomials.
    pub fn height(&self, a: &AmbVal) -> u64 {
        match self {
            Ambient::Integers => int(a).unsigned_abs(),
            Ambient::Poly(p) => poly(a)
                .iter()
                .rev()
                .fold(0u64, |acc, &c| acc.saturating_mul(*p as u64).saturating_add(c as u64)),
        }
    }

    fn decode(&self, mut code: u64) -> AmbVal {
        match self {
            Ambient::Integers => AmbVal::Int(code as i64),
            Ambient::Poly(p) => {
                let mut cs = Vec::new();
                while code > 0 {
                    cs.push((code % *p as u64) as u32);
                    code /= *p as u64;
                }
                AmbVal::Poly(cs)
            }
        }
    }

    /// All values of height at most `h`, in increasing height order.
    pub fn values_up_to(&self, h: u64) -> Vec<AmbVal> {
        match self {
            Ambient::Integers => {
                let mut out = vec![AmbVal::Int(0)];
                for k in 1..=h as i64 {
                    out.push(AmbVal::Int(k));
                    out.push(AmbVal::Int(-k));
                }
                out
            }
            Ambient::Poly(_) => (0..=h).map(|c| self.decode(c)).collect(),
        }
    }

    /// Canonical (positive / monic) nonzero values of height at most `h`.
    pub fn canonical_up_to(&self, h: u64) -> Vec<AmbVal> {
        self.values_up_to(h)
            .into_iter()
            .filter(|v| !self.is_zero(v) && self.canonical(v).0 == *v)
            .collect()
    }

    /// Number of residues modulo a nonzero `m`.
    pub fn residue_count(&self, m: &AmbVal) -> Option<u64> {
        match self {
            Ambient::Integers => Some(int(m).unsigned_abs()),
            Ambient::Poly(p) => (*p as u64).checked_pow(self.degree(m)? as u32),
        }
    }

    /// All canonical residues modulo a nonzero `m`.
    pub fn residues(&self, m: &AmbVal) -> Vec<AmbVal> {
        let n = self.residue_count(m).expect("residue ring too large");
        (0..n).map(|c| self.decode(c)).collect()
    }

    pub fn check_declared(&self, a: &AmbVal) -> bool {
        match self {
            Ambient::Integers => int(a).abs() <= MAX_DECLARED_INT,
            Ambient::Poly(p) => *p <= MAX_CHARACTERISTIC && self.degree(a).unwrap_or(0) <= 16,
        }
    }

    pub fn render(&self, a: &AmbVal) -> String {
        a.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integer_euclid() {
        let z = Ambient::Integers;
        let (q, r) = z.divrem(&AmbVal::Int(-7), &AmbVal::Int(3));
        assert_eq!((q, r), (AmbVal::Int(-3), AmbVal::Int(2)));
        assert_eq!(z.gcd(&AmbVal::Int(-12), &AmbVal::Int(18)), AmbVal::Int(6));
        assert_eq!(z.mod_inverse(&AmbVal::Int(5), &AmbVal::Int(6)), Some(AmbVal::Int(5)));
        assert_eq!(z.mod_inverse(&AmbVal::Int(2), &AmbVal::Int(6)), None);
        assert_eq!(z.valuation(&AmbVal::Int(12), &AmbVal::Int(2)), 2);
        assert_eq!(z.prime_factors(&AmbVal::Int(-60)), vec![AmbVal::Int(2), AmbVal::Int(3), AmbVal::Int(5)]);
    }

    #[test]
    #[should_panic(expected = "arithmetic overflow")]
    fn overflow_aborts() {
        let z = Ambient::Integers;
        z.mul(&AmbVal::Int(i64::MAX / 2), &AmbVal::Int(3));
    }

    #[test]
    fn polynomials_over_f2() {
        let f = Ambient::Poly(2);
        let t = f.variable();
        let t1 = f.add(&t, &f.one());
        // (t+1)^2 = t^2 + 1 over F2
        assert_eq!(f.mul(&t1, &t1), AmbVal::Poly(vec![1, 0, 1]));
        assert!(f.is_prime(&AmbVal::Poly(vec![1, 1, 1])));
        assert!(!f.is_prime(&AmbVal::Poly(vec![1, 0, 1])));
        assert_eq!(f.prime_factors(&AmbVal::Poly(vec![0, 1, 0, 1])), vec![AmbVal::Poly(vec![0, 1]), AmbVal::Poly(vec![1, 1])]);
        let inv = f.mod_inverse(&t, &AmbVal::Poly(vec![1, 1, 1])).unwrap();
        assert_eq!(f.rem(&f.mul(&inv, &t), &AmbVal::Poly(vec![1, 1, 1])), f.one());
        assert_eq!(f.residues(&AmbVal::Poly(vec![1, 1, 1])).len(), 4);
    }

    #[test]
    fn height_enumeration_is_monotone() {
        for amb in [Ambient::Integers, Ambient::Poly(3)] {
            for h in 0..6 {
                let small = amb.values_up_to(h);
                let big = amb.values_up_to(h + 1);
                assert!(small.iter().all(|v| big.contains(v)));
                assert!(small.iter().all(|v| amb.height(v) <= h));
            }
        }
    }
}
