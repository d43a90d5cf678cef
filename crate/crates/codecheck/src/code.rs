//! Linear code constructions: Reed–Solomon (MDS), Reed–Muller, seeded random
//! codes, subfield subcodes and trace codes, exhaustive minimum distance, and
//! the direct-syndrome baseline with operation counting.

use std::io::{BufRead, Write};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::{parse_ext_tokens, parse_field_tokens, Field};
use crate::linalg::{read_nonempty_line, Matrix, Vector};
use crate::rng;
use crate::verify::OpCounter;

/// Enumeration ceiling: operations touching all q^k codewords refuse to run
/// past this many words.
pub const ENUM_BUDGET: u128 = 1 << 24;

/// Budget for exact constructor-time invariant checks (orthogonality, rank);
/// larger instances fall back to a seeded randomized orthogonality check and
/// skip the rank recomputation.
const CHECK_BUDGET: u128 = 1 << 25;

/// What is known about a code's minimum distance.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Distance {
    /// Known analytically or certified by exhaustive enumeration.
    Exact(usize),
    /// Caller-supplied lower bound, not certified.
    Assumed(usize),
    Unknown,
}

/// An [n,k] linear code with generator and parity-check matrices.
#[derive(Debug, Clone)]
pub struct LinearCode {
    field: Arc<Field>,
    n: usize,
    k: usize,
    generator: Matrix,
    parity_check: Matrix,
    label: String,
    distance: Distance,
}

impl LinearCode {
    /// Wraps and validates a (generator, parity-check) pair. Orthogonality is
    /// checked exactly when affordable and by seeded random combinations
    /// otherwise; rank recomputation is skipped above [`CHECK_BUDGET`].
    pub fn from_parts(
        generator: Matrix,
        parity_check: Matrix,
        label: impl Into<String>,
        distance: Distance,
    ) -> Result<LinearCode> {
        let field = generator.field().clone();
        let n = generator.cols();
        let k = generator.rows();
        if k == 0 || n == 0 || k > n {
            return Err(Error::InvalidParams(format!(
                "need 0 < k <= n, got k={k}, n={n}"
            )));
        }
        if parity_check.field() != &field {
            return Err(Error::FieldMismatch);
        }
        if parity_check.rows() != n - k || parity_check.cols() != n {
            return Err(Error::DimensionMismatch(format!(
                "parity check must be {}x{n}, got {}x{}",
                n - k,
                parity_check.rows(),
                parity_check.cols()
            )));
        }

        let orth_cost = (k as u128) * ((n - k) as u128) * (n as u128);
        if orth_cost <= CHECK_BUDGET {
            if !generator.mul(&parity_check.transpose())?.is_zero() {
                return Err(Error::InvalidParams(
                    "generator and parity check are not orthogonal".into(),
                ));
            }
        } else {
            let mut r = rng::seeded(0x6f727468, 0);
            for _ in 0..16 {
                let v = Vector::from_packed(
                    &field,
                    (0..k).map(|_| rng::sample_below(&mut r, field.order())).collect(),
                )
                .expect("sampled values are canonical");
                let c = generator.transpose().mul_vec(&v)?;
                if !parity_check.mul_vec(&c)?.is_zero() {
                    return Err(Error::InvalidParams(
                        "generator and parity check are not orthogonal".into(),
                    ));
                }
            }
        }
        let gen_rank_cost = (k as u128) * (k as u128) * (n as u128);
        if gen_rank_cost <= CHECK_BUDGET && generator.rank() != k {
            return Err(Error::InvalidParams("generator is not full rank".into()));
        }
        let pc_rank_cost = ((n - k) as u128).pow(2) * (n as u128);
        if n > k && pc_rank_cost <= CHECK_BUDGET && parity_check.rank() != n - k {
            return Err(Error::InvalidParams("parity check is not full rank".into()));
        }

        Ok(LinearCode {
            field,
            n,
            k,
            generator,
            parity_check,
            label: label.into(),
            distance,
        })
    }

    /// Builds a code from a generator alone; the parity check is the
    /// generator's nullspace.
    pub fn from_generator(
        generator: Matrix,
        label: impl Into<String>,
        distance: Distance,
    ) -> Result<LinearCode> {
        let parity_check = generator.nullspace();
        LinearCode::from_parts(generator, parity_check, label, distance)
    }

    /// Reed–Solomon code over the given field: row i of the generator is the
    /// evaluation of X^i at n fixed points.
    ///
    /// Point order is pinned for reproducibility: with n equal to the field
    /// order the points are 0, 1, g, g², … for the canonical generator g;
    /// otherwise they are g⁰, g¹, …, gⁿ⁻¹ (all nonzero elements when
    /// n = q−1). Minimum distance is n−k+1 (MDS).
    pub fn rs(field: &Arc<Field>, n: usize, k: usize) -> Result<LinearCode> {
        let q = field.order();
        if n as u64 > q {
            return Err(Error::InvalidParams(format!(
                "n={n} exceeds the {q} available evaluation points"
            )));
        }
        if k == 0 || k > n {
            return Err(Error::InvalidParams(format!("need 0 < k <= n, got k={k}, n={n}")));
        }
        let g = field.multiplicative_generator();
        let mut points = Vec::with_capacity(n);
        if n as u64 == q {
            points.push(0);
        }
        let mut cur = 1;
        while points.len() < n {
            points.push(cur);
            cur = field.work_mul(cur, g);
        }
        Self::rs_at_points(field, points, k, format!("rs[{n},{k},{}]", n - k + 1))
    }

    /// Reed–Solomon code evaluated at all field elements in canonical packed
    /// order 0, 1, 2, …. This is the coordinate order under which an m-variate
    /// evaluation code over F_q and a univariate one over F_{q^m} line up
    /// coordinate by coordinate, so Reed–Muller codes are literal subfield
    /// subcodes (see [`crate::rmlist`]).
    pub fn rs_all_points(field: &Arc<Field>, k: usize) -> Result<LinearCode> {
        let q = field.order() as usize;
        if k == 0 || k > q {
            return Err(Error::InvalidParams(format!("need 0 < k <= {q}, got k={k}")));
        }
        let points: Vec<u64> = field.elements().collect();
        Self::rs_at_points(field, points, k, format!("rsnat[{q},{k},{}]", q - k + 1))
    }

    fn rs_at_points(
        field: &Arc<Field>,
        points: Vec<u64>,
        k: usize,
        label: String,
    ) -> Result<LinearCode> {
        let n = points.len();
        // row i+1 is row i scaled pointwise by the evaluation points
        let mut rows: Vec<u64> = Vec::with_capacity(k * n);
        rows.extend(std::iter::repeat_n(1, n));
        for i in 1..k {
            for j in 0..n {
                let prev = rows[(i - 1) * n + j];
                rows.push(field.work_mul(prev, points[j]));
            }
        }
        let generator = Matrix::from_packed(field, k, n, rows)?;
        let parity_check = if n as u64 == field.order() - 1 && n > k {
            // evaluation points form the full multiplicative group: the dual
            // is spanned by the evaluations of X^t for t = 1..=n-k
            Matrix::from_fn(field, n - k, n, |t, j| {
                field.work_pow(points[j], t as u64 + 1)
            })
        } else {
            generator.nullspace()
        };
        LinearCode::from_parts(generator, parity_check, label, Distance::Exact(n - k + 1))
    }

    /// Reed–Muller code RM_q(r, m): evaluations of all monomials with
    /// per-variable degree < q and total degree ≤ r at the q^m points of
    /// F_q^m.
    ///
    /// Point j has coordinates equal to the base-q digits of j (coordinate t
    /// is digit t); monomials are ordered graded-lexicographically. The
    /// minimum distance is q^(m−u−1)·(q−s) for r = u(q−1)+s, 0 ≤ s < q−1.
    pub fn reed_muller(field: &Arc<Field>, r: u32, m: u32) -> Result<LinearCode> {
        if field.ext_degree() != 1 {
            return Err(Error::InvalidParams(
                "Reed–Muller codes are built over a plain field, not a tower".into(),
            ));
        }
        let q = field.order();
        if u64::from(r) > u64::from(m) * (q - 1) {
            return Err(Error::InvalidParams(format!(
                "degree r={r} out of range for {m} variables over order {q}"
            )));
        }
        let n128 = (q as u128).pow(m);
        if n128 > 1 << 20 {
            return Err(Error::BudgetExceeded(format!("q^m = {n128} points")));
        }
        let n = n128 as usize;

        let mut monomials: Vec<Vec<u64>> = Vec::new();
        let mut exps = vec![0u64; m as usize];
        loop {
            if exps.iter().sum::<u64>() <= u64::from(r) {
                monomials.push(exps.clone());
            }
            // odometer over per-variable exponents < q
            let mut t = 0;
            loop {
                if t == exps.len() {
                    break;
                }
                exps[t] += 1;
                if exps[t] < q {
                    break;
                }
                exps[t] = 0;
                t += 1;
            }
            if t == exps.len() {
                break;
            }
        }
        monomials.sort_by_key(|e| (e.iter().sum::<u64>(), e.clone()));

        let generator = Matrix::from_fn(field, monomials.len(), n, |row, j| {
            let mut val = 1;
            let mut point = j as u64;
            for &e in &monomials[row] {
                let coord = point % q;
                val = field.work_mul(val, field.work_pow(coord, e));
                point /= q;
            }
            val
        });
        let parity_check = generator.nullspace();

        let deg_quot = u64::from(r) / (q - 1);
        let deg_rem = u64::from(r) % (q - 1);
        let dist = if deg_quot >= u64::from(m) {
            1
        } else {
            q.pow(m - deg_quot as u32 - 1) as usize * (q - deg_rem) as usize
        };
        LinearCode::from_parts(
            generator,
            parity_check,
            format!("rm{q}({r},{m})"),
            Distance::Exact(dist),
        )
    }

    /// Seeded random code in systematic form [I_k | A] with A uniform from
    /// the named deterministic generator. Same seed, same code.
    pub fn random(field: &Arc<Field>, n: usize, k: usize, seed: u64) -> Result<LinearCode> {
        if k == 0 || k >= n {
            return Err(Error::InvalidParams(format!("need 0 < k < n, got k={k}, n={n}")));
        }
        let mut r = rng::seeded(seed, 0);
        let a = Matrix::from_fn(field, k, n - k, |_, _| rng::sample_below(&mut r, field.order()));
        let generator = Matrix::from_fn(field, k, n, |i, j| {
            if j < k {
                u64::from(i == j)
            } else {
                a.get(i, j - k).value()
            }
        });
        // H = [-Aᵀ | I]
        let parity_check = Matrix::from_fn(field, n - k, n, |i, j| {
            if j < k {
                field.work_neg(a.get(j, i).value())
            } else {
                u64::from(j - k == i)
            }
        });
        LinearCode::from_parts(
            generator,
            parity_check,
            format!("random[{n},{k}]seed={seed}"),
            Distance::Unknown,
        )
    }

    /// The full space F^n as a degenerate code (k = n, empty parity check,
    /// identity generator).
    pub fn full_space(field: &Arc<Field>, n: usize) -> LinearCode {
        LinearCode {
            field: field.clone(),
            n,
            k: n,
            generator: Matrix::identity(field, n),
            parity_check: Matrix::zeros(field, 0, n),
            label: format!("full[{n}]"),
            distance: Distance::Exact(1),
        }
    }

    /// The subfield subcode {c ∈ C : every coordinate lies in the base
    /// field}, described over the base field. Computed by expanding each
    /// parity constraint into extension-degree many base-field constraints
    /// and taking the nullspace.
    pub fn subfield_subcode(&self, base: &Arc<Field>) -> Result<LinearCode> {
        if !self.field.extends(base) {
            return Err(Error::NotASubfield);
        }
        let u = self.field.ext_degree();
        if u == 1 {
            // the subcode of C over its own field is C itself
            return Ok(self.clone());
        }
        let q = self.field.base_order();
        let expanded = Matrix::from_fn(base, self.parity_check.rows() * u as usize, self.n, |i, j| {
            let row = i / u as usize;
            let t = (i % u as usize) as u32;
            (self.parity_check.at(row, j) / q.pow(t)) % q
        });
        let generator = expanded.nullspace();
        if generator.rows() == 0 {
            return Err(Error::InvalidParams("subfield subcode is trivial".into()));
        }
        let parity_check = expanded.row_basis();
        LinearCode::from_parts(
            generator,
            parity_check,
            format!("ssc({})", self.label),
            Distance::Unknown,
        )
    }

    /// The trace code Tr(C): coordinatewise traces of all codewords, down to
    /// the declared base field.
    pub fn trace_code(&self) -> Result<LinearCode> {
        let generator = trace_span(&self.generator);
        if generator.rows() == 0 {
            return Err(Error::InvalidParams("trace code is trivial".into()));
        }
        let parity_check = generator.nullspace();
        LinearCode::from_parts(
            generator,
            parity_check,
            format!("tr({})", self.label),
            Distance::Unknown,
        )
    }

    /// The dual code (generator and parity check swapped).
    pub fn dual(&self) -> Result<LinearCode> {
        if self.k == self.n {
            return Err(Error::InvalidParams("the dual of the full space is trivial".into()));
        }
        LinearCode::from_parts(
            self.parity_check.clone(),
            self.generator.clone(),
            format!("dual({})", self.label),
            Distance::Unknown,
        )
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn generator(&self) -> &Matrix {
        &self.generator
    }

    pub fn parity_check(&self) -> &Matrix {
        &self.parity_check
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn distance(&self) -> Distance {
        self.distance
    }

    /// Replaces the distance annotation (e.g. an assumed lower bound).
    pub fn with_distance(mut self, distance: Distance) -> LinearCode {
        self.distance = distance;
        self
    }

    /// Number of codewords, q^k (saturating at u128::MAX).
    pub fn codeword_count(&self) -> u128 {
        (self.field.order() as u128)
            .checked_pow(self.k as u32)
            .unwrap_or(u128::MAX)
    }

    pub fn encode(&self, message: &Vector) -> Result<Vector> {
        if message.len() != self.k {
            return Err(Error::DimensionMismatch(format!(
                "message length {} != k = {}",
                message.len(),
                self.k
            )));
        }
        self.generator.transpose().mul_vec(message)
    }

    /// The syndrome Hxᵀ (uncounted; see [`LinearCode::syndrome_direct`]).
    pub fn syndrome(&self, x: &Vector) -> Result<Vector> {
        if x.len() != self.n {
            return Err(Error::DimensionMismatch(format!(
                "vector length {} != n = {}",
                x.len(),
                self.n
            )));
        }
        self.parity_check.mul_vec(x)
    }

    /// Direct syndrome computation, charging the standard dense cost:
    /// (n−k)·n multiplications and (n−k)·(n−1) additions.
    pub fn syndrome_direct(&self, x: &Vector, counter: &mut OpCounter) -> Result<Vector> {
        let s = self.syndrome(x)?;
        let rows = (self.n - self.k) as u64;
        counter.add_muls(rows * self.n as u64);
        counter.add_adds(rows * (self.n as u64 - 1));
        Ok(s)
    }

    pub fn contains(&self, x: &Vector) -> Result<bool> {
        Ok(self.syndrome(x)?.is_zero())
    }

    /// Encodes a uniformly random message drawn from the seeded generator.
    pub fn random_codeword(&self, seed: u64) -> Result<Vector> {
        let mut r = rng::seeded(seed, 2);
        let msg = Vector::from_packed(
            &self.field,
            (0..self.k).map(|_| rng::sample_below(&mut r, self.field.order())).collect(),
        )?;
        self.encode(&msg)
    }

    /// Visits every codeword (including zero) in message-index order. The
    /// enumeration is incremental: each step adds a precomputed delta row.
    pub fn for_each_codeword(&self, mut f: impl FnMut(&[u64])) -> Result<()> {
        let count = self.codeword_count();
        if count > ENUM_BUDGET {
            return Err(Error::BudgetExceeded(format!(
                "{count} codewords exceeds the {ENUM_BUDGET} enumeration budget"
            )));
        }
        let fld = &self.field;
        let q = fld.order();
        // deltas[t][v]: change to the codeword when message digit t steps
        // from value v to v+1 (wrapping to 0 at q−1)
        let deltas: Vec<Vec<Vec<u64>>> = (0..self.k)
            .map(|t| {
                let row = self.generator.row_slice(t);
                (0..q)
                    .map(|v| {
                        let next = if v + 1 == q { 0 } else { v + 1 };
                        row.iter()
                            .map(|&g| {
                                fld.work_sub(fld.work_mul(next, g), fld.work_mul(v, g))
                            })
                            .collect()
                    })
                    .collect()
            })
            .collect();

        let mut cw = vec![0u64; self.n];
        let mut digits = vec![0u64; self.k];
        f(&cw);
        for _ in 1..count {
            let mut t = 0;
            loop {
                let old = digits[t];
                for (c, d) in cw.iter_mut().zip(&deltas[t][old as usize]) {
                    *c = fld.work_add(*c, *d);
                }
                if old + 1 == q {
                    digits[t] = 0;
                    t += 1;
                } else {
                    digits[t] = old + 1;
                    break;
                }
            }
            f(&cw);
        }
        Ok(())
    }

    /// Exact minimum distance by exhaustive enumeration of all q^k codewords.
    pub fn min_distance_exhaustive(&self) -> Result<usize> {
        let mut best = usize::MAX;
        self.for_each_codeword(|cw| {
            let w = cw.iter().filter(|&&v| v != 0).count();
            if w > 0 && w < best {
                best = w;
            }
        })?;
        Ok(best)
    }

    /// The distance value usable for a designed probability: exact or
    /// certified values pass through, unknown distances are certified by
    /// exhaustive enumeration. The flag reports an uncertified assumption.
    pub fn resolved_distance(&self) -> Result<(usize, bool)> {
        match self.distance {
            Distance::Exact(d) => Ok((d, false)),
            Distance::Assumed(d) => Ok((d, true)),
            Distance::Unknown => Ok((self.min_distance_exhaustive()?, false)),
        }
    }

    /// Writes the code file: `CODE <label> <field> n k [d.. ]`, then the
    /// generator and parity check in the shared matrix text format.
    pub fn write_text(&self, w: &mut impl Write) -> Result<()> {
        let label = self.label.replace(char::is_whitespace, "_");
        write!(w, "CODE {label} {} {} {}", self.field.text_form(), self.n, self.k)?;
        match self.distance {
            Distance::Exact(d) => write!(w, " d={d}")?,
            Distance::Assumed(d) => write!(w, " d>={d}")?,
            Distance::Unknown => {}
        }
        writeln!(w)?;
        self.generator.write_text(w)?;
        self.parity_check.write_text(w)?;
        Ok(())
    }

    pub fn read_text(r: &mut impl BufRead) -> Result<LinearCode> {
        let header = read_nonempty_line(r)?;
        let mut toks = header.split_whitespace();
        match toks.next() {
            Some("CODE") => {}
            other => return Err(Error::Parse(format!("expected CODE header, got {other:?}"))),
        }
        let label = toks
            .next()
            .ok_or_else(|| Error::Parse("missing code label".into()))?
            .to_string();
        let mut field = parse_field_tokens(&mut toks)?;
        let mut next = toks.next();
        if next == Some("ext") {
            let u: u32 = toks
                .next()
                .ok_or_else(|| Error::Parse("missing ext degree".into()))?
                .parse()
                .map_err(|e| Error::Parse(format!("bad ext degree: {e}")))?;
            field = parse_ext_tokens(&field, u, &mut toks)?;
            next = toks.next();
        }
        let n: usize = next
            .ok_or_else(|| Error::Parse("missing n".into()))?
            .parse()
            .map_err(|e| Error::Parse(format!("bad n: {e}")))?;
        let k: usize = toks
            .next()
            .ok_or_else(|| Error::Parse("missing k".into()))?
            .parse()
            .map_err(|e| Error::Parse(format!("bad k: {e}")))?;
        let mut distance = Distance::Unknown;
        if let Some(tok) = toks.next() {
            if let Some(d) = tok.strip_prefix("d>=") {
                distance = Distance::Assumed(
                    d.parse().map_err(|e| Error::Parse(format!("bad distance: {e}")))?,
                );
            } else if let Some(d) = tok.strip_prefix("d=") {
                distance = Distance::Exact(
                    d.parse().map_err(|e| Error::Parse(format!("bad distance: {e}")))?,
                );
            } else {
                return Err(Error::Parse(format!("unexpected header token {tok:?}")));
            }
        }
        let generator = Matrix::read_text(r, &field)?;
        let parity_check = Matrix::read_text(r, &field)?;
        if generator.cols() != n || generator.rows() != k {
            return Err(Error::Parse("generator shape contradicts the header".into()));
        }
        if k == n {
            if parity_check.rows() != 0 {
                return Err(Error::Parse("full-space code must have an empty parity check".into()));
            }
            let mut code = LinearCode::full_space(&field, n);
            code.generator = generator;
            code.label = label;
            code.distance = distance;
            return Ok(code);
        }
        LinearCode::from_parts(generator, parity_check, label, distance)
    }
}

/// Row basis (over the base field) of the trace code of the row span of
/// `rows`: traces of basis multiples y^t·row for every row and 0 ≤ t < u.
/// Returns a 0×n matrix for a zero input span.
pub fn trace_span(rows: &Matrix) -> Matrix {
    let work = rows.field();
    let base = work.base_subfield();
    let u = work.ext_degree();
    let q = work.base_order();
    let stacked = Matrix::from_fn(&base, rows.rows() * u as usize, rows.cols(), |i, j| {
        let row = i / u as usize;
        let t = (i % u as usize) as u32;
        work.trace_packed(work.work_mul(q.pow(t).min(work.order() - 1), rows.at(row, j)))
    });
    stacked.row_basis()
}
