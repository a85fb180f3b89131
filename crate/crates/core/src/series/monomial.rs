use std::fmt;

/// `x^k y^l ε^m`. Ordering is lexicographic on `(k, l, m)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial {
    pub k: u32,
    pub l: u32,
    pub m: u32,
}

impl Monomial {
    pub const ONE: Monomial = Monomial { k: 0, l: 0, m: 0 };
    pub const X: Monomial = Monomial { k: 1, l: 0, m: 0 };
    pub const Y: Monomial = Monomial { k: 0, l: 1, m: 0 };
    pub const EPS: Monomial = Monomial { k: 0, l: 0, m: 1 };

    pub const fn new(k: u32, l: u32, m: u32) -> Self {
        Monomial { k, l, m }
    }

    pub fn times(self, other: Monomial) -> Monomial {
        Monomial::new(self.k + other.k, self.l + other.l, self.m + other.m)
    }

    /// True when the monomial does not involve the space variables.
    pub fn is_pure_eps(&self) -> bool {
        self.k == 0 && self.l == 0
    }

    pub fn xy_degree(&self) -> u32 {
        self.k + self.l
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (name, e) in [("x", self.k), ("y", self.l), ("eps", self.m)] {
            match e {
                0 => {}
                1 => parts.push(name.to_string()),
                e => parts.push(format!("{name}^{e}")),
            }
        }
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join("*"))
        }
    }
}

/// Weights `(k0, l0, m0)` of `x`, `y` and `ε`; the weight of `x^k y^l ε^m`
/// is `k k0 + l l0 + m m0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Grading {
    pub k0: u32,
    pub l0: u32,
    pub m0: u32,
}

impl Grading {
    /// Jordan-block ordering: x of order 2, y of order 3, ε of order 6.
    pub const NONDIAG: Grading = Grading { k0: 2, l0: 3, m0: 6 };
    /// Diagonal ordering: x and y of order 1, ε of order 3.
    pub const DIAG: Grading = Grading { k0: 1, l0: 1, m0: 3 };

    /// Ordering for the potential `y²/2 + b xⁿ`: x of order 2, y of order n,
    /// ε of order 2n.
    pub const fn potential(n: u32) -> Grading {
        Grading {
            k0: 2,
            l0: n,
            m0: 2 * n,
        }
    }

    pub fn new(k0: u32, l0: u32, m0: u32) -> Option<Grading> {
        (k0 > 0 && l0 > 0 && m0 > 0).then_some(Grading { k0, l0, m0 })
    }

    pub fn weight(&self, mono: &Monomial) -> u32 {
        mono.k * self.k0 + mono.l * self.l0 + mono.m * self.m0
    }

    /// Lowest admissible weight of a Lie-series generator.
    pub fn generator_threshold(&self) -> u32 {
        self.k0 + self.l0 + 1
    }

    /// All monomials of weight exactly `w`, in lexicographic order.
    pub fn monomials_of_weight(&self, w: u32) -> Vec<Monomial> {
        let mut out = Vec::new();
        for k in 0..=w / self.k0 {
            let rest = w - k * self.k0;
            for l in 0..=rest / self.l0 {
                let rest = rest - l * self.l0;
                if rest.is_multiple_of(self.m0) {
                    out.push(Monomial::new(k, l, rest / self.m0));
                }
            }
        }
        out
    }

    /// All monomials of weight at most `n`, in lexicographic order.
    pub fn monomials_up_to(&self, n: u32) -> Vec<Monomial> {
        let mut out = Vec::new();
        for k in 0..=n / self.k0 {
            let rest = n - k * self.k0;
            for l in 0..=rest / self.l0 {
                let rest = rest - l * self.l0;
                for m in 0..=rest / self.m0 {
                    out.push(Monomial::new(k, l, m));
                }
            }
        }
        out
    }

    /// Largest order `n'` such that every monomial of weight `<= n'` under
    /// `new` has weight `<= n` under `self`.
    pub fn complete_horizon(&self, n: u32, new: Grading) -> u32 {
        if *self == new {
            return n;
        }
        let span = self.k0.max(self.l0).max(self.m0);
        let min_new = (n + 1..=n + span)
            .flat_map(|w| self.monomials_of_weight(w))
            .map(|mono| new.weight(&mono))
            .min()
            .expect("some monomial exists just above any order");
        min_new - 1
    }
}

impl fmt::Display for Grading {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.k0, self.l0, self.m0)
    }
}
