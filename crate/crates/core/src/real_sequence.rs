//! Rational sequences with a known limit, turned into oracle descriptors.
//!
//! All reals in an interval share their first `p+1` signs exactly when the
//! interval holds no dyadic born on day `≤ p`, since those are the points
//! the bisection compares against. A modulus of convergence therefore
//! certifies a column once the ball it provides avoids every such dyadic.
//! A dyadic limit `x` always blocks the columns from its birthday on; there
//! the side from which the rows approach decides the column.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;

use crate::limit_engine::{LimitError, Oracle, Row, Stabilization, TailClaim};
use crate::real_bridge::{pow2_neg, simplest_between, Dyadic, RealStream};
use crate::sign_expansion::Sign;

/// Finest precision tried when certifying a column.
const MAX_PRECISION: u32 = 2048;

#[derive(Debug, Clone)]
pub enum RealLimit {
    Exact(BigRational),
    Stream(RealStream),
    PlusInfinity,
    MinusInfinity,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    Above,
    Below,
    Equal,
    /// Infinitely many rows on each side.
    Both,
}

/// Where the rows lie relative to the limit, from index `from` on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SideWitness {
    pub side: Side,
    pub from: u64,
}

/// Rows `term(n)` converging to `limit`. For a finite limit, every row from
/// `modulus(m)` on is within `2^-m` of it; for `±∞`, every row from
/// `modulus(m)` on is `≥ m` (or `≤ -m`).
#[derive(Clone)]
pub struct RealSequence {
    pub label: String,
    pub term: Arc<dyn Fn(u64) -> BigRational + Send + Sync>,
    pub limit: RealLimit,
    pub modulus: Arc<dyn Fn(u32) -> u64 + Send + Sync>,
    pub side: Option<SideWitness>,
}

impl fmt::Debug for RealSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RealSequence")
            .field("label", &self.label)
            .field("limit", &self.limit)
            .field("side", &self.side)
            .finish()
    }
}

/// Whether some dyadic born by day `day` lies in the interval from `a` to
/// `b`, each end open or closed.
fn holds_early_dyadic(
    a: &BigRational,
    a_open: bool,
    b: &BigRational,
    b_open: bool,
    day: u64,
) -> bool {
    let (mut lo, mut hi): (Option<Dyadic>, Option<Dyadic>) = (None, None);
    let mut c = Dyadic::zero();
    for _ in 0..=day {
        let q = c.to_rational();
        let above_a = if a_open { q > *a } else { q >= *a };
        let below_b = if b_open { q < *b } else { q <= *b };
        match (above_a, below_b) {
            (true, true) => return true,
            (false, _) => lo = Some(c),
            (_, false) => hi = Some(c),
        }
        c = simplest_between(lo.as_ref(), hi.as_ref());
    }
    false
}

fn bigrat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

impl RealSequence {
    fn inconsistent(&self, place: u64, detail: String) -> LimitError {
        LimitError::Inconsistent {
            label: self.label.clone(),
            place,
            detail,
        }
    }

    /// The limit as a dyadic, if it is one.
    pub fn dyadic_limit(&self) -> Option<Dyadic> {
        match &self.limit {
            RealLimit::Exact(q) => Dyadic::from_rational(q).ok(),
            _ => None,
        }
    }

    /// Spot-checks the modulus for precisions `0..precisions` and the side
    /// witness, `samples` rows at a time.
    pub fn validate(&self, precisions: u32, samples: u64) -> Result<(), LimitError> {
        for m in 0..precisions {
            let start = (self.modulus)(m);
            for n in start..start + samples {
                let r = (self.term)(n);
                let ok = match &self.limit {
                    RealLimit::Exact(x) => (&r - x).abs() <= pow2_neg(m),
                    RealLimit::Stream(s) => {
                        let (q, radius) = s.enclosure(m);
                        (&r - &q).abs() <= radius * bigrat(2)
                    }
                    RealLimit::PlusInfinity => r >= bigrat(m as i64),
                    RealLimit::MinusInfinity => r <= bigrat(-(m as i64)),
                };
                if !ok {
                    return Err(self.inconsistent(
                        0,
                        format!("modulus violated: row {n} at precision 2^-{m}"),
                    ));
                }
            }
        }
        if let (Some(w), RealLimit::Exact(x)) = (self.side, &self.limit) {
            let rows: Vec<BigRational> = (w.from..w.from + samples).map(|n| (self.term)(n)).collect();
            let ok = match w.side {
                Side::Above => rows.iter().all(|r| r > x),
                Side::Below => rows.iter().all(|r| r < x),
                Side::Equal => rows.iter().all(|r| r == x),
                Side::Both => rows.iter().any(|r| r > x) && rows.iter().any(|r| r < x),
            };
            if !ok {
                return Err(self.inconsistent(0, format!("side witness {:?} violated", w.side)));
            }
        }
        Ok(())
    }

    /// Certifies every column below `depth`; `m` only grows with the place,
    /// so the search resumes where the previous column stopped.
    fn claims(&self, depth: u64) -> Result<Vec<Stabilization>, LimitError> {
        let mut out = Vec::with_capacity(depth as usize);
        let exact_dyadic = self.dyadic_limit();
        let mut m = 0u32;
        for p in 0..depth {
            let claim = match &self.limit {
                RealLimit::PlusInfinity | RealLimit::MinusInfinity => {
                    Stabilization::StabilizesAt((self.modulus)(p as u32 + 1))
                }
                RealLimit::Exact(x) => {
                    let born_early = exact_dyadic.is_some_and(|d| (d.birthday() as u64) <= p);
                    if born_early {
                        self.side_claim(x, p, &mut m)?
                    } else {
                        self.ball_claim(p, &mut m, |m| (x.clone(), pow2_neg(m)))?
                    }
                }
                RealLimit::Stream(s) => self.ball_claim(p, &mut m, |m| {
                    let (q, r) = s.enclosure(m);
                    (q, r * bigrat(2))
                })?,
            };
            out.push(claim);
        }
        Ok(out)
    }

    fn ball_claim(
        &self,
        p: u64,
        m: &mut u32,
        ball: impl Fn(u32) -> (BigRational, BigRational),
    ) -> Result<Stabilization, LimitError> {
        while *m <= MAX_PRECISION {
            let (q, radius) = ball(*m);
            if !holds_early_dyadic(&(&q - &radius), false, &(&q + &radius), false, p) {
                return Ok(Stabilization::StabilizesAt((self.modulus)(*m)));
            }
            *m += 1;
        }
        Err(self.inconsistent(p, "no precision separates the limit".into()))
    }

    fn side_claim(&self, x: &BigRational, p: u64, m: &mut u32) -> Result<Stabilization, LimitError> {
        let w = self.side.ok_or_else(|| {
            LimitError::Unsupported(format!("{}: dyadic limit needs a side witness", self.label))
        })?;
        match w.side {
            Side::Equal => Ok(Stabilization::StabilizesAt(w.from)),
            Side::Both => Ok(Stabilization::Oscillates),
            Side::Above | Side::Below => {
                while *m <= MAX_PRECISION {
                    let delta = pow2_neg(*m);
                    let early = if w.side == Side::Above {
                        holds_early_dyadic(x, true, &(x + &delta), false, p)
                    } else {
                        holds_early_dyadic(&(x - &delta), false, x, true, p)
                    };
                    if !early {
                        return Ok(Stabilization::StabilizesAt((self.modulus)(*m).max(w.from)));
                    }
                    *m += 1;
                }
                Err(self.inconsistent(p, "no precision separates the side".into()))
            }
        }
    }

    /// The run of length ω that ends the limit, when there is one.
    pub fn tail_claim(&self) -> Option<TailClaim> {
        match (&self.limit, self.dyadic_limit(), self.side) {
            (RealLimit::PlusInfinity, _, _) => Some(TailClaim {
                from: 0,
                sign: Sign::Plus,
            }),
            (RealLimit::MinusInfinity, _, _) => Some(TailClaim {
                from: 0,
                sign: Sign::Minus,
            }),
            (_, Some(d), Some(w)) => {
                let from = d.birthday() as u64 + 1;
                match w.side {
                    Side::Above => Some(TailClaim {
                        from,
                        sign: Sign::Minus,
                    }),
                    Side::Below => Some(TailClaim {
                        from,
                        sign: Sign::Plus,
                    }),
                    Side::Equal | Side::Both => None,
                }
            }
            _ => None,
        }
    }

    /// The oracle descriptor of the rows, with claims certified from the
    /// modulus. At least `depth` places are examined, more when a tail claim
    /// starts later or a dyadic limit is born later.
    pub fn oracle(&self, probe_budget: u64, depth: u64) -> Result<Oracle, LimitError> {
        let tail = self.tail_claim();
        let depth = match (tail, self.dyadic_limit()) {
            (Some(t), _) => depth.max(t.from + 4),
            (None, Some(d)) => depth.max(d.birthday() as u64 + 1),
            (None, None) => depth,
        };
        let claims = self.claims(depth)?;
        let term = self.term.clone();
        Ok(Oracle {
            label: self.label.clone(),
            gen: Arc::new(move |n| Row::Rational(term(n))),
            stabilization: Arc::new(move |p| claims[p as usize]),
            probe_budget,
            depth,
            tail,
        })
    }
}
