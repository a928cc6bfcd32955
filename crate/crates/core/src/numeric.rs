//! Real-subset descriptors and continuous piecewise-linear functions.
//!
//! [`SetDescriptor`] describes finite unions of points and intervals with
//! finite endpoints. It carries the convex hull and the "hull above an
//! isolated minimum" operators ([`SetDescriptor::cotwo`],
//! [`SetDescriptor::inftwo`]) used to state where a transformation of risk
//! attitudes must be strictly increasing.
//!
//! [`PiecewiseLinearFn`] is the single function representation used
//! downstream: transformations between risk attitudes and the valuation
//! transform of an outside-option distribution are both stored as knot
//! lists.

use serde::{Deserialize, Serialize};

use crate::error::{domain, invalid, Result};

/// Tolerance for values produced by exact piecewise arithmetic.
pub const TOL_EXACT: f64 = 1e-9;
/// Tolerance for values produced by numerical differentiation.
pub const TOL_NUMERIC: f64 = 1e-6;

/// One connected component of a [`SetDescriptor`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Component {
    Point {
        at: f64,
    },
    Interval {
        lo: f64,
        hi: f64,
        lo_closed: bool,
        hi_closed: bool,
    },
}

impl Component {
    pub fn point(at: f64) -> Self {
        Component::Point { at }
    }

    pub fn closed(lo: f64, hi: f64) -> Self {
        Component::Interval {
            lo,
            hi,
            lo_closed: true,
            hi_closed: true,
        }
    }

    pub fn open(lo: f64, hi: f64) -> Self {
        Component::Interval {
            lo,
            hi,
            lo_closed: false,
            hi_closed: false,
        }
    }

    /// `(lo, hi]`
    pub fn left_open(lo: f64, hi: f64) -> Self {
        Component::Interval {
            lo,
            hi,
            lo_closed: false,
            hi_closed: true,
        }
    }

    /// `[lo, hi)`
    pub fn right_open(lo: f64, hi: f64) -> Self {
        Component::Interval {
            lo,
            hi,
            lo_closed: true,
            hi_closed: false,
        }
    }

    pub fn lo(&self) -> f64 {
        match *self {
            Component::Point { at } => at,
            Component::Interval { lo, .. } => lo,
        }
    }

    pub fn hi(&self) -> f64 {
        match *self {
            Component::Point { at } => at,
            Component::Interval { hi, .. } => hi,
        }
    }

    fn lo_closed(&self) -> bool {
        match *self {
            Component::Point { .. } => true,
            Component::Interval { lo_closed, .. } => lo_closed,
        }
    }

    fn hi_closed(&self) -> bool {
        match *self {
            Component::Point { .. } => true,
            Component::Interval { hi_closed, .. } => hi_closed,
        }
    }

    pub fn contains(&self, x: f64) -> bool {
        match *self {
            Component::Point { at } => x == at,
            Component::Interval {
                lo,
                hi,
                lo_closed,
                hi_closed,
            } => (x > lo || (lo_closed && x == lo)) && (x < hi || (hi_closed && x == hi)),
        }
    }

    // Builds a component from generalized bounds, collapsing [a, a] to a point.
    fn from_bounds(lo: f64, hi: f64, lo_closed: bool, hi_closed: bool) -> Option<Self> {
        if lo < hi {
            Some(Component::Interval {
                lo,
                hi,
                lo_closed,
                hi_closed,
            })
        } else if lo == hi && lo_closed && hi_closed {
            Some(Component::Point { at: lo })
        } else {
            None
        }
    }
}

/// A finite union of points and intervals with finite endpoints.
///
/// Components are kept sorted, pairwise disjoint, and merged whenever two of
/// them overlap or touch at a point belonging to either.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Component>", into = "Vec<Component>")]
pub struct SetDescriptor {
    parts: Vec<Component>,
}

impl TryFrom<Vec<Component>> for SetDescriptor {
    type Error = crate::Error;

    fn try_from(parts: Vec<Component>) -> Result<Self> {
        SetDescriptor::new(parts)
    }
}

impl From<SetDescriptor> for Vec<Component> {
    fn from(set: SetDescriptor) -> Self {
        set.parts
    }
}

impl SetDescriptor {
    pub fn new(parts: Vec<Component>) -> Result<Self> {
        for part in &parts {
            let (lo, hi) = (part.lo(), part.hi());
            if !lo.is_finite() || !hi.is_finite() {
                return Err(invalid("set endpoints must be finite"));
            }
            if let Component::Interval { .. } = part {
                if lo >= hi {
                    return Err(invalid(format!("interval needs lo < hi, got ({lo}, {hi})")));
                }
            }
        }
        Ok(Self::normalized(parts))
    }

    pub fn empty() -> Self {
        SetDescriptor { parts: Vec::new() }
    }

    /// The finite set `{values...}`.
    pub fn from_points(values: &[f64]) -> Result<Self> {
        Self::new(values.iter().map(|&at| Component::point(at)).collect())
    }

    fn normalized(mut parts: Vec<Component>) -> Self {
        parts.sort_by(|a, b| {
            a.lo()
                .total_cmp(&b.lo())
                .then(b.lo_closed().cmp(&a.lo_closed()))
        });
        let mut out: Vec<Component> = Vec::with_capacity(parts.len());
        for part in parts {
            let Some(last) = out.last_mut() else {
                out.push(part);
                continue;
            };
            let touches = part.lo() < last.hi()
                || (part.lo() == last.hi() && (last.hi_closed() || part.lo_closed()));
            if !touches {
                out.push(part);
                continue;
            }
            let lo_closed = if part.lo() == last.lo() {
                last.lo_closed() || part.lo_closed()
            } else {
                last.lo_closed()
            };
            let (hi, hi_closed) = if part.hi() > last.hi() {
                (part.hi(), part.hi_closed())
            } else if part.hi() < last.hi() {
                (last.hi(), last.hi_closed())
            } else {
                (last.hi(), last.hi_closed() || part.hi_closed())
            };
            *last = Component::from_bounds(last.lo(), hi, lo_closed, hi_closed)
                .expect("merged component is non-empty");
        }
        SetDescriptor { parts: out }
    }

    pub fn components(&self) -> &[Component] {
        &self.parts
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn contains(&self, x: f64) -> bool {
        self.parts.iter().any(|c| c.contains(x))
    }

    pub fn inf(&self) -> Option<f64> {
        self.parts.first().map(Component::lo)
    }

    pub fn sup(&self) -> Option<f64> {
        self.parts.last().map(Component::hi)
    }

    /// Whether every point of `self` lies in `other`.
    pub fn is_subset_of(&self, other: &SetDescriptor) -> bool {
        self.parts.iter().all(|part| {
            other.parts.iter().any(|o| {
                let lo_ok = part.lo() > o.lo()
                    || (part.lo() == o.lo() && (o.lo_closed() || !part.lo_closed()));
                let hi_ok = part.hi() < o.hi()
                    || (part.hi() == o.hi() && (o.hi_closed() || !part.hi_closed()));
                lo_ok && hi_ok
            })
        })
    }

    /// Convex hull `co(A)`.
    pub fn convex_hull(&self) -> SetDescriptor {
        match (self.parts.first(), self.parts.last()) {
            (Some(first), Some(last)) => {
                let part = Component::from_bounds(
                    first.lo(),
                    last.hi(),
                    first.lo_closed(),
                    last.hi_closed(),
                )
                .expect("hull of a non-empty set is non-empty");
                SetDescriptor { parts: vec![part] }
            }
            _ => SetDescriptor::empty(),
        }
    }

    // The first branch of the cotwo/inftwo definition applies exactly when A
    // starts with an isolated point whose successor component does not
    // contain its own infimum.
    fn isolated_minimum(&self) -> Option<(f64, &Component)> {
        match self.parts.as_slice() {
            [Component::Point { at }, next, ..] if !next.lo_closed() => Some((*at, next)),
            _ => None,
        }
    }

    /// `co(A \ {inf A}) ∪ {inf A}` when the minimum of `A` is isolated from
    /// the rest of `A` by a gap whose upper end is not attained, `co(A)`
    /// otherwise.
    pub fn cotwo(&self) -> Result<SetDescriptor> {
        if self.is_empty() {
            return Err(domain("cotwo of an empty set"));
        }
        match self.isolated_minimum() {
            Some((at, next)) => {
                let last = self.parts.last().expect("non-empty");
                let rest = Component::from_bounds(next.lo(), last.hi(), false, last.hi_closed())
                    .expect("rest is a proper interval");
                Ok(SetDescriptor {
                    parts: vec![Component::point(at), rest],
                })
            }
            None => Ok(self.convex_hull()),
        }
    }

    /// `inf(A \ {inf A})` in the isolated-minimum case, `inf A` otherwise.
    ///
    /// A single point `{a}` is treated as convex, so `inftwo {a} = a`.
    pub fn inftwo(&self) -> Result<f64> {
        if self.is_empty() {
            return Err(domain("inftwo of an empty set"));
        }
        Ok(match self.isolated_minimum() {
            Some((_, next)) => next.lo(),
            None => self.parts[0].lo(),
        })
    }
}

/// A knot `(x, y)` of a piecewise-linear function.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Knot {
    pub x: f64,
    pub y: f64,
}

/// Slope of a piecewise-linear function on `[from, to)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SlopeSegment {
    pub from: f64,
    pub to: f64,
    pub slope: f64,
}

/// Continuous piecewise-linear function on `[lo, hi]`, linear between
/// consecutive knots.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "PwlRepr", into = "PwlRepr")]
pub struct PiecewiseLinearFn {
    knots: Vec<Knot>,
}

#[derive(Serialize, Deserialize)]
struct PwlRepr {
    knots: Vec<Knot>,
}

impl TryFrom<PwlRepr> for PiecewiseLinearFn {
    type Error = crate::Error;

    fn try_from(repr: PwlRepr) -> Result<Self> {
        PiecewiseLinearFn::new(repr.knots.into_iter().map(|k| (k.x, k.y)).collect())
    }
}

impl From<PiecewiseLinearFn> for PwlRepr {
    fn from(f: PiecewiseLinearFn) -> Self {
        PwlRepr { knots: f.knots }
    }
}

impl PiecewiseLinearFn {
    /// Needs at least two knots with strictly increasing, finite abscissae.
    pub fn new(knots: Vec<(f64, f64)>) -> Result<Self> {
        if knots.len() < 2 {
            return Err(invalid(
                "a piecewise-linear function needs at least two knots",
            ));
        }
        if knots.iter().any(|(x, y)| !x.is_finite() || !y.is_finite()) {
            return Err(invalid("knots must be finite"));
        }
        if knots.windows(2).any(|w| w[0].0 >= w[1].0) {
            return Err(invalid("knot abscissae must be strictly increasing"));
        }
        Ok(PiecewiseLinearFn {
            knots: knots.into_iter().map(|(x, y)| Knot { x, y }).collect(),
        })
    }

    /// Rebuilds a function from its value at `lo` and its slope segments.
    pub fn from_slopes(y0: f64, segments: &[SlopeSegment]) -> Result<Self> {
        let first = segments
            .first()
            .ok_or_else(|| invalid("need at least one slope segment"))?;
        let mut knots = vec![(first.from, y0)];
        let mut y = y0;
        for seg in segments {
            y += seg.slope * (seg.to - seg.from);
            knots.push((seg.to, y));
        }
        Self::new(knots)
    }

    pub fn knots(&self) -> &[Knot] {
        &self.knots
    }

    pub fn lo(&self) -> f64 {
        self.knots[0].x
    }

    pub fn hi(&self) -> f64 {
        self.knots[self.knots.len() - 1].x
    }

    pub fn eval(&self, x: f64) -> Result<f64> {
        if !(x >= self.lo() && x <= self.hi()) {
            return Err(domain(format!(
                "{x} is outside the domain [{}, {}]",
                self.lo(),
                self.hi()
            )));
        }
        let i = self.knots.partition_point(|k| k.x <= x);
        if i == self.knots.len() {
            return Ok(self.knots[i - 1].y);
        }
        let (a, b) = (self.knots[i - 1], self.knots[i]);
        let t = (x - a.x) / (b.x - a.x);
        Ok(a.y + t * (b.y - a.y))
    }

    /// Right-hand derivative: the slope of each segment `[x_i, x_{i+1})`.
    pub fn right_derivative(&self) -> Vec<SlopeSegment> {
        self.knots
            .windows(2)
            .map(|w| SlopeSegment {
                from: w[0].x,
                to: w[1].x,
                slope: (w[1].y - w[0].y) / (w[1].x - w[0].x),
            })
            .collect()
    }

    /// Segment slopes are non-decreasing within `tol`.
    pub fn is_convex(&self, tol: f64) -> bool {
        self.right_derivative()
            .windows(2)
            .all(|w| w[1].slope >= w[0].slope - tol)
    }

    pub fn is_increasing(&self, tol: f64) -> bool {
        self.right_derivative().iter().all(|s| s.slope >= -tol)
    }
}
