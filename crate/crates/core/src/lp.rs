//! Exact rational linear programming.
//!
//! Dense two-phase primal simplex over [`Rational`] with Bland's rule. Every
//! optimal outcome carries row duals, and every infeasible outcome a Farkas
//! certificate; both are re-verified against the original program before
//! being returned.
//!
//! Normal form used internally: each variable is shifted onto `[0, ∞)` (a
//! variable with only an upper bound is reflected, a free variable is split),
//! finite upper bounds on doubly bounded variables become extra `≤` rows, rows
//! are sign-normalized to a non-negative right-hand side, and every row gets an
//! artificial column so that the initial basis is the identity.

use crate::error::{Error, Result};
use crate::rational::Rational;
use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sense {
    Maximize,
    Minimize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Constraint {
    pub coefficients: Vec<Rational>,
    pub relation: Relation,
    pub rhs: Rational,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Bounds {
    pub lower: Option<Rational>,
    pub upper: Option<Rational>,
}

impl Bounds {
    pub fn non_negative() -> Self {
        Self { lower: Some(Rational::zero()), upper: None }
    }

    pub fn free() -> Self {
        Self { lower: None, upper: None }
    }

    fn contains(&self, x: &Rational) -> bool {
        self.lower.as_ref().is_none_or(|l| x >= l) && self.upper.as_ref().is_none_or(|u| x <= u)
    }
}

/// A linear program. Variables are non-negative unless their bounds say otherwise.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearProgram {
    pub sense: Sense,
    pub objective: Vec<Rational>,
    pub constraints: Vec<Constraint>,
    pub bounds: Vec<Bounds>,
}

impl LinearProgram {
    pub fn new(sense: Sense, objective: Vec<Rational>) -> Self {
        let bounds = vec![Bounds::non_negative(); objective.len()];
        Self { sense, objective, constraints: Vec::new(), bounds }
    }

    /// A program with a zero objective, for feasibility questions.
    pub fn feasibility(num_vars: usize) -> Self {
        Self::new(Sense::Maximize, vec![Rational::zero(); num_vars])
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn constrain(&mut self, coefficients: Vec<Rational>, relation: Relation, rhs: Rational) -> &mut Self {
        self.constraints.push(Constraint { coefficients, relation, rhs });
        self
    }

    pub fn set_bounds(&mut self, var: usize, lower: Option<Rational>, upper: Option<Rational>) -> &mut Self {
        self.bounds[var] = Bounds { lower, upper };
        self
    }

    pub fn set_free(&mut self, var: usize) -> &mut Self {
        self.bounds[var] = Bounds::free();
        self
    }

    fn validate(&self) -> Result<()> {
        let n = self.num_vars();
        if self.bounds.len() != n {
            return Err(Error::MalformedProgram(format!(
                "{} bounds for {} variables",
                self.bounds.len(),
                n
            )));
        }
        for (i, c) in self.constraints.iter().enumerate() {
            if c.coefficients.len() != n {
                return Err(Error::MalformedProgram(format!(
                    "row {i} has width {}, expected {n}",
                    c.coefficients.len()
                )));
            }
        }
        Ok(())
    }

    /// Checks that `x` satisfies every row and bound exactly.
    pub fn is_feasible_point(&self, x: &[Rational]) -> bool {
        x.len() == self.num_vars()
            && self.bounds.iter().zip(x).all(|(b, v)| b.contains(v))
            && self.constraints.iter().all(|c| {
                let lhs: Rational = c.coefficients.iter().zip(x).map(|(a, v)| a * v).sum();
                match c.relation {
                    Relation::Le => lhs <= c.rhs,
                    Relation::Eq => lhs == c.rhs,
                    Relation::Ge => lhs >= c.rhs,
                }
            })
    }

    pub fn objective_value(&self, x: &[Rational]) -> Rational {
        self.objective.iter().zip(x).map(|(c, v)| c * v).sum()
    }

    fn has_empty_box(&self) -> bool {
        self.bounds.iter().any(|b| matches!((&b.lower, &b.upper), (Some(l), Some(u)) if l > u))
    }

    /// Checks a Farkas certificate: `y_i ≥ 0` on `≤` rows, `y_i ≤ 0` on `≥`
    /// rows, and `min over the bound box of (Σ y_i a_i)·x > Σ y_i b_i`.
    /// An empty bound box needs no multipliers.
    pub fn verifies_infeasibility(&self, cert: &FarkasCertificate) -> bool {
        if self.has_empty_box() {
            return true;
        }
        let y = &cert.multipliers;
        if y.len() != self.constraints.len() {
            return false;
        }
        let signs_ok = self.constraints.iter().zip(y).all(|(c, yi)| match c.relation {
            Relation::Le => !yi.is_negative(),
            Relation::Ge => !yi.is_positive(),
            Relation::Eq => true,
        });
        if !signs_ok {
            return false;
        }
        let rhs: Rational = self.constraints.iter().zip(y).map(|(c, yi)| yi * &c.rhs).sum();
        let mut box_min = Rational::zero();
        for j in 0..self.num_vars() {
            let cj: Rational = self.constraints.iter().zip(y).map(|(c, yi)| yi * &c.coefficients[j]).sum();
            let bound = match cj.cmp(&Rational::zero()) {
                Ordering::Greater => self.bounds[j].lower.as_ref(),
                Ordering::Less => self.bounds[j].upper.as_ref(),
                Ordering::Equal => continue,
            };
            match bound {
                Some(b) => box_min += cj * b,
                None => return false,
            }
        }
        box_min > rhs
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Solution {
    pub value: Rational,
    pub x: Vec<Rational>,
    /// Shadow price of each row: the rate of change of the optimum with its
    /// right-hand side.
    pub duals: Vec<Rational>,
}

/// Row multipliers proving infeasibility; see [`LinearProgram::verifies_infeasibility`].
#[derive(Clone, Debug, PartialEq)]
pub struct FarkasCertificate {
    pub multipliers: Vec<Rational>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum LpOutcome {
    Optimal(Solution),
    Infeasible(FarkasCertificate),
    Unbounded,
}

impl LpOutcome {
    pub fn optimal(self) -> Option<Solution> {
        match self {
            Self::Optimal(s) => Some(s),
            _ => None,
        }
    }

    pub fn is_infeasible(&self) -> bool {
        matches!(self, Self::Infeasible(_))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Feasibility {
    Feasible(Vec<Rational>),
    Infeasible(FarkasCertificate),
}

/// Decides feasibility of `constraints` with the given bounds (non-negative
/// when `bounds` is `None`).
pub fn feasible(num_vars: usize, constraints: Vec<Constraint>, bounds: Option<Vec<Bounds>>) -> Result<Feasibility> {
    let mut lp = LinearProgram::feasibility(num_vars);
    lp.constraints = constraints;
    if let Some(b) = bounds {
        lp.bounds = b;
    }
    match solve(&lp)? {
        LpOutcome::Optimal(s) => Ok(Feasibility::Feasible(s.x)),
        LpOutcome::Infeasible(c) => Ok(Feasibility::Infeasible(c)),
        LpOutcome::Unbounded => unreachable!("a zero objective is bounded"),
    }
}

/// How an original variable is recovered from internal columns.
#[derive(Clone, Debug)]
enum VarMap {
    /// `x = offset + col`
    Shifted { col: usize, offset: Rational },
    /// `x = offset - col`
    Reflected { col: usize, offset: Rational },
    /// `x = pos - neg`
    Split { pos: usize, neg: usize },
}

struct Tableau {
    rows: Vec<Vec<Rational>>,
    rhs: Vec<Rational>,
    basis: Vec<usize>,
    first_artificial: usize,
}

impl Tableau {
    fn pivot(&mut self, row: usize, col: usize, reduced: &mut [Rational], reduced_rhs: &mut Rational) {
        let p = self.rows[row][col].clone();
        debug_assert!(!p.is_zero());
        if !p.is_one() {
            for v in self.rows[row].iter_mut() {
                *v /= &p;
            }
            self.rhs[row] /= &p;
        }
        let pivot_row = self.rows[row].clone();
        let pivot_rhs = self.rhs[row].clone();
        for (i, r) in self.rows.iter_mut().enumerate() {
            if i == row || r[col].is_zero() {
                continue;
            }
            let factor = r[col].clone();
            for (v, pv) in r.iter_mut().zip(&pivot_row) {
                if !pv.is_zero() {
                    *v -= &factor * pv;
                }
            }
            self.rhs[i] -= &factor * &pivot_rhs;
        }
        if !reduced[col].is_zero() {
            let factor = reduced[col].clone();
            for (v, pv) in reduced.iter_mut().zip(&pivot_row) {
                if !pv.is_zero() {
                    *v -= &factor * pv;
                }
            }
            *reduced_rhs -= &factor * &pivot_rhs;
        }
        self.basis[row] = col;
    }

    /// Reduced costs `c_j - c_B B^{-1} A_j` and `-c_B B^{-1} b`.
    fn reduced_costs(&self, costs: &[Rational]) -> (Vec<Rational>, Rational) {
        let mut reduced = costs.to_vec();
        let mut reduced_rhs = Rational::zero();
        for (i, &b) in self.basis.iter().enumerate() {
            let cb = &costs[b];
            if cb.is_zero() {
                continue;
            }
            for (v, a) in reduced.iter_mut().zip(&self.rows[i]) {
                if !a.is_zero() {
                    *v -= cb * a;
                }
            }
            reduced_rhs -= cb * &self.rhs[i];
        }
        (reduced, reduced_rhs)
    }

    /// Runs the simplex loop for `max costs·x`, never entering columns at or
    /// beyond `entry_limit`. Returns `false` when unbounded.
    fn optimize(&mut self, costs: &[Rational], entry_limit: usize) -> bool {
        let (mut reduced, mut reduced_rhs) = self.reduced_costs(costs);
        loop {
            // Bland: lowest-index improving column
            let Some(enter) = (0..entry_limit).find(|&j| reduced[j].is_positive()) else {
                return true;
            };
            let mut leave: Option<(usize, Rational)> = None;
            for i in 0..self.rows.len() {
                let a = &self.rows[i][enter];
                if !a.is_positive() {
                    continue;
                }
                let ratio = &self.rhs[i] / a;
                let better = match &leave {
                    None => true,
                    Some((r, best)) => match ratio.cmp(best) {
                        Ordering::Less => true,
                        Ordering::Equal => self.basis[i] < self.basis[*r],
                        Ordering::Greater => false,
                    },
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
            let Some((row, _)) = leave else {
                return false;
            };
            self.pivot(row, enter, &mut reduced, &mut reduced_rhs);
        }
    }

    /// `y = c_B B^{-1}`, read off the artificial block (initially the identity).
    fn row_duals(&self, costs: &[Rational]) -> Vec<Rational> {
        let m = self.rows.len();
        (0..m)
            .map(|k| {
                self.basis
                    .iter()
                    .enumerate()
                    .map(|(r, &b)| &costs[b] * &self.rows[r][self.first_artificial + k])
                    .sum()
            })
            .collect()
    }
}

/// Solves `lp` exactly.
pub fn solve(lp: &LinearProgram) -> Result<LpOutcome> {
    lp.validate()?;
    let n = lp.num_vars();
    let user_rows = lp.constraints.len();
    if lp.has_empty_box() {
        return Ok(LpOutcome::Infeasible(FarkasCertificate {
            multipliers: vec![Rational::zero(); user_rows],
        }));
    }

    // Column layout for the shifted program.
    let mut maps = Vec::with_capacity(n);
    let mut num_struct = 0usize;
    let mut bound_rows: Vec<(usize, Rational)> = Vec::new();
    for b in &lp.bounds {
        match (&b.lower, &b.upper) {
            (Some(l), upper) => {
                if let Some(u) = upper {
                    bound_rows.push((num_struct, u - l));
                }
                maps.push(VarMap::Shifted { col: num_struct, offset: l.clone() });
                num_struct += 1;
            }
            (None, Some(u)) => {
                maps.push(VarMap::Reflected { col: num_struct, offset: u.clone() });
                num_struct += 1;
            }
            (None, None) => {
                maps.push(VarMap::Split { pos: num_struct, neg: num_struct + 1 });
                num_struct += 2;
            }
        }
    }

    // Internal rows over structural columns: (coefficients, relation, rhs).
    let mut rows: Vec<(Vec<Rational>, Relation, Rational)> = Vec::with_capacity(user_rows + bound_rows.len());
    for c in &lp.constraints {
        let mut coeffs = vec![Rational::zero(); num_struct];
        let mut rhs = c.rhs.clone();
        for (a, map) in c.coefficients.iter().zip(&maps) {
            if a.is_zero() {
                continue;
            }
            match map {
                VarMap::Shifted { col, offset } => {
                    coeffs[*col] += a;
                    rhs -= a * offset;
                }
                VarMap::Reflected { col, offset } => {
                    coeffs[*col] -= a;
                    rhs -= a * offset;
                }
                VarMap::Split { pos, neg } => {
                    coeffs[*pos] += a;
                    coeffs[*neg] -= a;
                }
            }
        }
        rows.push((coeffs, c.relation, rhs));
    }
    for (col, width) in &bound_rows {
        let mut coeffs = vec![Rational::zero(); num_struct];
        coeffs[*col] = Rational::one();
        rows.push((coeffs, Relation::Le, width.clone()));
    }

    // Objective as maximization over structural columns.
    let flip_objective = lp.sense == Sense::Minimize;
    let mut struct_costs = vec![Rational::zero(); num_struct];
    let mut constant = Rational::zero();
    for (c, map) in lp.objective.iter().zip(&maps) {
        let c = if flip_objective { -c } else { c.clone() };
        match map {
            VarMap::Shifted { col, offset } => {
                struct_costs[*col] += &c;
                constant += &c * offset;
            }
            VarMap::Reflected { col, offset } => {
                struct_costs[*col] -= &c;
                constant += &c * offset;
            }
            VarMap::Split { pos, neg } => {
                struct_costs[*pos] += &c;
                struct_costs[*neg] -= &c;
            }
        }
    }

    // Sign-normalize, then lay out slack and artificial columns.
    let m = rows.len();
    let mut flipped = vec![false; m];
    for (i, (coeffs, rel, rhs)) in rows.iter_mut().enumerate() {
        if rhs.is_negative() {
            flipped[i] = true;
            for v in coeffs.iter_mut() {
                *v = -v.clone();
            }
            *rhs = -rhs.clone();
            *rel = match rel {
                Relation::Le => Relation::Ge,
                Relation::Ge => Relation::Le,
                Relation::Eq => Relation::Eq,
            };
        }
    }
    let num_slack = rows.iter().filter(|r| r.1 != Relation::Eq).count();
    let first_artificial = num_struct + num_slack;
    let num_cols = first_artificial + m;
    let mut tableau = Tableau {
        rows: Vec::with_capacity(m),
        rhs: Vec::with_capacity(m),
        basis: (first_artificial..num_cols).collect(),
        first_artificial,
    };
    let mut slack = num_struct;
    for (i, (coeffs, rel, rhs)) in rows.iter().enumerate() {
        let mut row = coeffs.clone();
        row.resize(num_cols, Rational::zero());
        match rel {
            Relation::Le => {
                row[slack] = Rational::one();
                slack += 1;
            }
            Relation::Ge => {
                row[slack] = -Rational::one();
                slack += 1;
            }
            Relation::Eq => {}
        }
        row[first_artificial + i] = Rational::one();
        tableau.rows.push(row);
        tableau.rhs.push(rhs.clone());
    }

    // Phase 1: maximize -Σ artificials.
    let mut phase1 = vec![Rational::zero(); num_cols];
    for c in phase1.iter_mut().skip(first_artificial) {
        *c = -Rational::one();
    }
    let bounded = tableau.optimize(&phase1, num_cols);
    debug_assert!(bounded);
    let infeasibility: Rational = tableau
        .basis
        .iter()
        .zip(&tableau.rhs)
        .filter(|(b, _)| **b >= first_artificial)
        .map(|(_, v)| v.clone())
        .sum();
    if infeasibility.is_positive() {
        let y_internal = tableau.row_duals(&phase1);
        let multipliers = (0..user_rows)
            .map(|i| if flipped[i] { -&y_internal[i] } else { y_internal[i].clone() })
            .collect();
        let cert = FarkasCertificate { multipliers };
        assert!(lp.verifies_infeasibility(&cert), "phase-1 Farkas certificate failed verification");
        return Ok(LpOutcome::Infeasible(cert));
    }

    // Drive zero-level artificials out of the basis where possible.
    for row in 0..m {
        if tableau.basis[row] < first_artificial {
            continue;
        }
        if let Some(col) = (0..first_artificial).find(|&j| !tableau.rows[row][j].is_zero()) {
            let mut scratch = vec![Rational::zero(); num_cols];
            let mut scratch_rhs = Rational::zero();
            tableau.pivot(row, col, &mut scratch, &mut scratch_rhs);
        }
    }

    // Phase 2 over structural and slack columns.
    let mut costs = struct_costs.clone();
    costs.resize(num_cols, Rational::zero());
    if !tableau.optimize(&costs, first_artificial) {
        return Ok(LpOutcome::Unbounded);
    }

    let mut internal_x = vec![Rational::zero(); num_cols];
    for (i, &b) in tableau.basis.iter().enumerate() {
        internal_x[b] = tableau.rhs[i].clone();
    }
    let internal_value: Rational = costs.iter().zip(&internal_x).map(|(c, v)| c * v).sum();

    // Strong duality on the internal program: b·y equals the optimum and
    // A^T y ≥ c on every structural and slack column.
    let y_internal = tableau.row_duals(&costs);
    let dual_value: Rational = rows.iter().zip(&y_internal).map(|(r, y)| &r.2 * y).sum();
    assert_eq!(dual_value, internal_value, "strong duality violated");
    let mut slack = num_struct;
    for (r, y) in rows.iter().zip(&y_internal) {
        match r.1 {
            Relation::Le => {
                assert!(!y.is_negative(), "dual sign violated on a <= row");
                slack += 1;
            }
            Relation::Ge => {
                assert!(!y.is_positive(), "dual sign violated on a >= row");
                slack += 1;
            }
            Relation::Eq => {}
        }
    }
    debug_assert_eq!(slack, first_artificial);
    for (j, cost) in struct_costs.iter().enumerate().take(num_struct) {
        let column: Rational = rows.iter().zip(&y_internal).map(|(r, y)| &r.0[j] * y).sum();
        assert!(column >= *cost, "dual infeasible on column {j}");
    }

    let x: Vec<Rational> = maps
        .iter()
        .map(|map| match map {
            VarMap::Shifted { col, offset } => offset + &internal_x[*col],
            VarMap::Reflected { col, offset } => offset - &internal_x[*col],
            VarMap::Split { pos, neg } => &internal_x[*pos] - &internal_x[*neg],
        })
        .collect();
    assert!(lp.is_feasible_point(&x), "optimal witness violates the program");
    let value = lp.objective_value(&x);
    let expected = if flip_objective { -(&internal_value + &constant) } else { &internal_value + &constant };
    assert_eq!(value, expected);

    let duals = (0..user_rows)
        .map(|i| {
            let y = if flipped[i] { -&y_internal[i] } else { y_internal[i].clone() };
            if flip_objective {
                -y
            } else {
                y
            }
        })
        .collect();
    Ok(LpOutcome::Optimal(Solution { value, x, duals }))
}
