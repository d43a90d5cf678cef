//! Test sets: the precomputed row collections S = rows(ḠᵀH) that make
//! randomized membership testing work.
//!
//! S is a test set for C with designed probability p when (a) x ∈ C iff x is
//! orthogonal to every row of S, and (b) every x ∉ C is non-orthogonal to at
//! least a (1−p) fraction of the rows. Building S from an outer [n̄, n−k, d̄]
//! code gives p = 1 − d̄/n̄ exactly: the vector of inner products of x with
//! all of S is the outer encoding ḠᵀHxᵀ of the syndrome, so a nonzero
//! syndrome forces at least d̄ nonzero inner products.
//!
//! Rows are stored materialized (n̄×n over F_{q^u}); verification never pays
//! for the matrix product. Designed probabilities are exact rationals.

use std::io::{BufRead, Write};
use std::sync::Arc;

use num::rational::Ratio;

use crate::code::LinearCode;
use crate::error::{Error, Result};
use crate::field::{parse_field_tokens, Field};
use crate::linalg::{read_nonempty_line, Matrix, Vector};

#[derive(Debug, Clone, PartialEq)]
pub struct TestSet {
    base_field: Arc<Field>,
    work_field: Arc<Field>,
    rows: Matrix,
    designed_p: Ratio<u64>,
    outer_label: String,
    /// The outer distance backing `designed_p` was an uncertified bound.
    assumed: bool,
}

impl TestSet {
    /// Builds the test set from a parity-check matrix H over F_q and an
    /// outer code over F_{q^u} with dimension n−k: the rows are ḠᵀH and the
    /// designed probability is exactly 1 − d̄/n̄.
    ///
    /// The outer distance must be exact, certified, or explicitly assumed;
    /// an unknown distance is certified by exhaustive enumeration (and the
    /// construction fails if that exceeds the budget).
    pub fn from_outer_code(h: &Matrix, outer: &LinearCode) -> Result<TestSet> {
        if outer.k() != h.rows() {
            return Err(Error::DimensionMismatch(format!(
                "outer code dimension {} must equal the parity-check row count {}",
                outer.k(),
                h.rows()
            )));
        }
        if !outer.field().extends(h.field()) {
            return Err(Error::NotASubfield);
        }
        let (dist, assumed) = outer.resolved_distance()?;
        let nbar = outer.n();
        if dist == 0 || dist >= nbar {
            return Err(Error::InvalidParams(format!(
                "outer distance {dist} of {nbar} rows leaves no designed probability in (0,1)"
            )));
        }
        let designed_p = Ratio::new((nbar - dist) as u64, nbar as u64);
        let rows = outer.generator().transpose().mul(h)?;
        Ok(TestSet {
            base_field: h.field().base_subfield(),
            work_field: rows.field().clone(),
            rows,
            designed_p,
            outer_label: outer.label().to_string(),
            assumed,
        })
    }

    /// MDS construction: for a target probability p in
    /// ((n−k−1)/(q^u−1), 1), sets m = ⌈(n−k−1)/p⌉ and uses a Reed–Solomon
    /// [m, n−k, m−(n−k)+1] outer code over F_{q^u}. The designed probability
    /// (n−k−1)/m never exceeds the target.
    pub fn mds(h: &Matrix, p_target: Ratio<u64>, u: u32) -> Result<TestSet> {
        let base = h.field();
        if base.ext_degree() != 1 {
            return Err(Error::InvalidParams(
                "the parity check must live over a plain field, not a tower".into(),
            ));
        }
        let r = h.rows();
        if r < 2 {
            return Err(Error::InvalidParams(
                "need n−k ≥ 2: with a single parity row every nonzero designed probability degenerates".into(),
            ));
        }
        if p_target >= Ratio::new(1, 1) || p_target <= Ratio::new(0, 1) {
            return Err(Error::InvalidParams("target probability must lie in (0,1)".into()));
        }
        let qu = (base.order() as u128).pow(u);
        // admissibility: p > (n−k−1)/(q^u − 1)
        let lhs = (r as u128 - 1) * (*p_target.denom() as u128);
        let rhs = (*p_target.numer() as u128) * (qu - 1);
        if lhs >= rhs {
            return Err(Error::InvalidParams(format!(
                "target probability {p_target} is below (n−k−1)/(q^u−1) = {}/{}",
                r - 1,
                qu - 1
            )));
        }
        let m = ((r as u128 - 1) * (*p_target.denom() as u128)).div_ceil(*p_target.numer() as u128);
        if m > qu {
            return Err(Error::InvalidParams(format!(
                "outer length m = {m} exceeds the {qu} evaluation points of the extension"
            )));
        }
        let work = base.extend(u, None)?;
        let outer = LinearCode::rs(&work, m as usize, r)?;
        let ts = TestSet::from_outer_code(h, &outer)?;
        debug_assert!(ts.designed_p <= p_target);
        Ok(ts)
    }

    pub fn base_field(&self) -> &Arc<Field> {
        &self.base_field
    }

    pub fn work_field(&self) -> &Arc<Field> {
        &self.work_field
    }

    /// Extension degree u of the rows' field over the code's field.
    pub fn ext_degree(&self) -> u32 {
        self.work_field.ext_degree()
    }

    /// Code length n.
    pub fn n(&self) -> usize {
        self.rows.cols()
    }

    /// Number of rows n̄ = ♯S.
    pub fn row_count(&self) -> usize {
        self.rows.rows()
    }

    pub fn rows(&self) -> &Matrix {
        &self.rows
    }

    pub fn designed_p(&self) -> Ratio<u64> {
        self.designed_p
    }

    pub fn outer_label(&self) -> &str {
        &self.outer_label
    }

    pub fn distance_assumed(&self) -> bool {
        self.assumed
    }

    /// Exact fraction of rows not orthogonal to x: wt(S·xᵀ)/n̄. Zero exactly
    /// when x is a codeword.
    pub fn non_orthogonal_fraction(&self, x: &Vector) -> Result<Ratio<u64>> {
        Ok(Ratio::new(
            self.non_orthogonal_count(x)? as u64,
            self.row_count() as u64,
        ))
    }

    /// Number of rows with nonzero inner product against x.
    pub fn non_orthogonal_count(&self, x: &Vector) -> Result<usize> {
        if x.len() != self.n() {
            return Err(Error::DimensionMismatch(format!(
                "vector length {} != n = {}",
                x.len(),
                self.n()
            )));
        }
        Ok(self.rows.mul_vec(x)?.weight())
    }

    /// Writes the test-set file:
    /// `TESTSET <field> <u> <n> <nbar> <p_num> <p_den> outer=<label>`
    /// (plus `extmod=<hex>` for towers and `assumed` for uncertified
    /// distances), followed by the rows in the matrix text format.
    pub fn save(&self, w: &mut impl Write) -> Result<()> {
        let base = &self.base_field;
        write!(
            w,
            "TESTSET {} {} {} {} {} {} outer={}",
            base.text_form(),
            self.ext_degree(),
            self.n(),
            self.row_count(),
            self.designed_p.numer(),
            self.designed_p.denom(),
            self.outer_label.replace(char::is_whitespace, "_"),
        )?;
        if self.ext_degree() > 1 {
            write!(w, " extmod={:x}", self.work_field.ext_modulus())?;
        }
        if self.assumed {
            write!(w, " assumed")?;
        }
        writeln!(w)?;
        self.rows.write_text(w)
    }

    /// Loads and validates a test-set file. The declared designed probability
    /// must be consistent with n̄ (d̄ = n̄·(1−p) must be a whole number in
    /// (0, n̄)) and with the outer label: a Reed–Solomon label rs[m,k,d] must
    /// satisfy m = n̄ and d = m−k+1 = d̄, and is re-certified by exhaustive
    /// enumeration when small enough.
    pub fn load(r: &mut impl BufRead) -> Result<TestSet> {
        let header = read_nonempty_line(r)?;
        let mut toks = header.split_whitespace();
        match toks.next() {
            Some("TESTSET") => {}
            other => return Err(Error::Parse(format!("expected TESTSET header, got {other:?}"))),
        }
        let base_field = parse_field_tokens(&mut toks)?;
        let u: u32 = parse_next(&mut toks, "extension degree")?;
        let n: usize = parse_next(&mut toks, "code length")?;
        let nbar: usize = parse_next(&mut toks, "row count")?;
        let p_num: u64 = parse_next(&mut toks, "probability numerator")?;
        let p_den: u64 = parse_next(&mut toks, "probability denominator")?;
        let mut outer_label = None;
        let mut extmod = None;
        let mut assumed = false;
        for tok in toks {
            if let Some(v) = tok.strip_prefix("outer=") {
                outer_label = Some(v.to_string());
            } else if let Some(v) = tok.strip_prefix("extmod=") {
                extmod =
                    Some(u64::from_str_radix(v, 16).map_err(|e| Error::Parse(e.to_string()))?);
            } else if tok == "assumed" {
                assumed = true;
            } else {
                return Err(Error::Parse(format!("unexpected header token {tok:?}")));
            }
        }
        let outer_label = outer_label.ok_or_else(|| Error::Parse("missing outer= label".into()))?;

        if p_den == 0 || p_num == 0 || p_num >= p_den {
            return Err(Error::Parse(format!(
                "designed probability {p_num}/{p_den} outside (0,1)"
            )));
        }
        let designed_p = Ratio::new(p_num, p_den);
        // recompute d̄ from the declared probability
        if !((nbar as u64) * designed_p.numer()).is_multiple_of(*designed_p.denom()) {
            return Err(Error::Parse(format!(
                "designed probability {designed_p} is not a fraction of {nbar} rows"
            )));
        }
        let dist = nbar as u64 - nbar as u64 * designed_p.numer() / designed_p.denom();

        let work_field = if u > 1 {
            match extmod {
                Some(m) => base_field.extend(u, Some(m))?,
                None => base_field.extend(u, None)?,
            }
        } else {
            base_field.clone()
        };

        // an rs[m,k,d] outer label pins d̄ analytically; re-derive and compare
        if let Some((m, k, d)) = parse_rs_label(&outer_label) {
            if m != nbar || d != m - k + 1 || d as u64 != dist {
                return Err(Error::Parse(format!(
                    "outer label {outer_label} contradicts the declared designed probability {designed_p}"
                )));
            }
            let words = (work_field.order() as u128).checked_pow(k as u32);
            if words.is_some_and(|w| w <= 1 << 16) {
                let outer = LinearCode::rs(&work_field, m, k)?;
                if outer.min_distance_exhaustive()? != d {
                    return Err(Error::Parse(
                        "outer code distance failed exhaustive re-certification".into(),
                    ));
                }
            }
        }

        let rows = Matrix::read_text(r, &work_field)?;
        if rows.rows() != nbar || rows.cols() != n {
            return Err(Error::Parse(format!(
                "row block is {}x{}, header declares {nbar}x{n}",
                rows.rows(),
                rows.cols()
            )));
        }
        Ok(TestSet {
            base_field,
            work_field,
            rows,
            designed_p,
            outer_label,
            assumed,
        })
    }
}

fn parse_next<'a, T: std::str::FromStr>(
    toks: &mut impl Iterator<Item = &'a str>,
    what: &str,
) -> Result<T>
where
    T::Err: std::fmt::Display,
{
    toks.next()
        .ok_or_else(|| Error::Parse(format!("missing {what}")))?
        .parse()
        .map_err(|e| Error::Parse(format!("bad {what}: {e}")))
}

/// Parses `rs[m,k,d]` (also accepting the `rsnat` prefix).
fn parse_rs_label(label: &str) -> Option<(usize, usize, usize)> {
    let rest = label.strip_prefix("rsnat").or_else(|| label.strip_prefix("rs"))?;
    let inner = rest.strip_prefix('[')?.strip_suffix(']')?;
    let mut it = inner.split(',');
    let m = it.next()?.parse().ok()?;
    let k = it.next()?.parse().ok()?;
    let d = it.next()?.parse().ok()?;
    if it.next().is_some() {
        return None;
    }
    Some((m, k, d))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code::Distance;

    fn hamming_7_4() -> LinearCode {
        let f2 = Field::prime(2).unwrap();
        #[rustfmt::skip]
        let g = Matrix::from_packed(&f2, 4, 7, vec![
            1, 0, 0, 0, 1, 1, 0,
            0, 1, 0, 0, 1, 0, 1,
            0, 0, 1, 0, 0, 1, 1,
            0, 0, 0, 1, 1, 1, 1,
        ]).unwrap();
        LinearCode::from_generator(g, "hamming[7,4]", Distance::Exact(3)).unwrap()
    }

    #[test]
    fn identity_outer_code_reduces_to_row_sampling() {
        let code = hamming_7_4();
        let full = LinearCode::full_space(code.field(), 3);
        let ts = TestSet::from_outer_code(code.parity_check(), &full).unwrap();
        assert_eq!(ts.rows(), code.parity_check());
        assert_eq!(ts.designed_p(), Ratio::new(2, 3)); // 1 − 1/(n−k)
    }

    #[test]
    fn mds_testset_for_hamming() {
        // n−k = 3, u = 3, target 1/3: m = ⌈2/(1/3)⌉ = 6, outer RS[6,3,4] over GF(8)
        let code = hamming_7_4();
        let ts = TestSet::mds(code.parity_check(), Ratio::new(1, 3), 3).unwrap();
        assert_eq!(ts.row_count(), 6);
        assert_eq!(ts.designed_p(), Ratio::new(1, 3));
        assert_eq!(ts.ext_degree(), 3);
        assert_eq!(ts.outer_label(), "rs[6,3,4]");
        assert_eq!(ts.work_field().order(), 8);
    }

    #[test]
    fn mds_single_parity_row_is_rejected() {
        let f2 = Field::prime(2).unwrap();
        let h = Matrix::from_packed(&f2, 1, 4, vec![1, 1, 1, 1]).unwrap();
        assert!(TestSet::mds(&h, Ratio::new(1, 2), 3).is_err());
    }

    #[test]
    fn mds_probability_formula_for_two_parity_rows() {
        // n−k = 2: designed_p = 1/⌈1/p⌉
        let f = Field::base(2, 2, None).unwrap();
        let code = LinearCode::rs(&f, 4, 2).unwrap();
        for (num, den) in [(1u64, 3u64), (1, 2), (2, 5), (3, 4)] {
            let p = Ratio::new(num, den);
            let ts = TestSet::mds(code.parity_check(), p, 2).unwrap();
            let m = den.div_ceil(num); // ⌈1/p⌉
            assert_eq!(ts.designed_p(), Ratio::new(1, m));
            assert!(ts.designed_p() <= p);
        }
    }

    #[test]
    fn mds_admissibility_errors() {
        let code = hamming_7_4();
        // u = 1 over GF(2): q^u − 1 = 1 ≤ n−k−1 = 2, no admissible p
        let err = TestSet::mds(code.parity_check(), Ratio::new(1, 100), 1).unwrap_err();
        assert!(err.to_string().contains("below (n−k−1)/(q^u−1)"), "{err}");
    }

    #[test]
    fn definition_and_fraction_bound_exhaustive_on_hamming() {
        // membership characterization and the (1−p) bound over all 128 vectors
        let code = hamming_7_4();
        let ts = TestSet::mds(code.parity_check(), Ratio::new(1, 3), 3).unwrap();
        let f2 = code.field();
        let mut codewords = 0;
        let mut non_codewords = 0;
        for bits in 0u64..128 {
            let x = Vector::from_packed(f2, (0..7).map(|i| (bits >> i) & 1).collect()).unwrap();
            let frac = ts.non_orthogonal_fraction(&x).unwrap();
            if code.contains(&x).unwrap() {
                assert_eq!(frac, Ratio::new(0, 1), "codeword orthogonal to every row");
                codewords += 1;
            } else {
                assert!(frac >= Ratio::new(4, 6), "fraction bound violated: {frac}");
                non_codewords += 1;
            }
        }
        assert_eq!((codewords, non_codewords), (16, 112));
    }

    #[test]
    fn fraction_equals_outer_encoding_of_syndrome() {
        // the two routes to the fraction: wt(S·xᵀ) vs wt(Ḡᵀ·(H·xᵀ))
        let code = hamming_7_4();
        let work = code.field().extend(3, None).unwrap();
        let outer = LinearCode::rs(&work, 6, 3).unwrap();
        let ts = TestSet::from_outer_code(code.parity_check(), &outer).unwrap();
        let gt = outer.generator().transpose();
        for bits in 0u64..128 {
            let x =
                Vector::from_packed(code.field(), (0..7).map(|i| (bits >> i) & 1).collect())
                    .unwrap();
            let syndrome = code.syndrome(&x).unwrap();
            let encoded = gt.mul_vec(&syndrome).unwrap();
            assert_eq!(
                ts.non_orthogonal_count(&x).unwrap(),
                encoded.weight(),
                "routes disagree at x = {bits:07b}"
            );
        }
    }

    #[test]
    fn unit_error_fraction_is_column_weight() {
        let code = hamming_7_4();
        let work = code.field().extend(3, None).unwrap();
        let outer = LinearCode::rs(&work, 6, 3).unwrap();
        let ts = TestSet::from_outer_code(code.parity_check(), &outer).unwrap();
        let gt = outer.generator().transpose();
        for j in 0..7 {
            let e = Vector::unit(code.field(), 7, j);
            let h_col = code.syndrome(&e).unwrap(); // column j of H
            let expected = gt.mul_vec(&h_col).unwrap().weight();
            assert_eq!(ts.non_orthogonal_count(&e).unwrap(), expected);
        }
    }

    #[test]
    fn outer_code_with_unknown_distance_is_certified_or_refused() {
        let f2 = Field::prime(2).unwrap();
        let work = f2.extend(4, None).unwrap();
        let code = LinearCode::random(&f2, 12, 6, 3).unwrap();
        // small random outer code: distance gets certified by enumeration
        let outer = LinearCode::random(&work, 10, 6, 7).unwrap();
        let ts = TestSet::from_outer_code(code.parity_check(), &outer).unwrap();
        assert!(!ts.distance_assumed());
        let (d, _) = outer.resolved_distance().unwrap();
        assert_eq!(
            ts.designed_p(),
            Ratio::new((10 - d) as u64, 10)
        );

        // an assumed bound is accepted but flagged
        let outer_assumed = LinearCode::random(&work, 10, 6, 7)
            .unwrap()
            .with_distance(Distance::Assumed(d));
        let ts2 = TestSet::from_outer_code(code.parity_check(), &outer_assumed).unwrap();
        assert!(ts2.distance_assumed());
        assert_eq!(ts2.designed_p(), ts.designed_p());
    }

    #[test]
    fn save_load_round_trip_is_exact() {
        let code = hamming_7_4();
        let ts = TestSet::mds(code.parity_check(), Ratio::new(1, 3), 3).unwrap();
        let mut buf = Vec::new();
        ts.save(&mut buf).unwrap();
        let back = TestSet::load(&mut &buf[..]).unwrap();
        assert_eq!(back, ts);
    }

    #[test]
    fn load_rejects_truncated_and_inconsistent_files() {
        let code = hamming_7_4();
        let ts = TestSet::mds(code.parity_check(), Ratio::new(1, 3), 3).unwrap();
        let mut buf = Vec::new();
        ts.save(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();

        // truncated row block
        let truncated: String = text.lines().take(4).collect::<Vec<_>>().join("\n");
        assert!(TestSet::load(&mut truncated.as_bytes()).is_err());

        // declared probability contradicting the outer label's d̄
        let tampered = text.replacen(" 1 3 outer=", " 1 2 outer=", 1);
        assert!(tampered.contains(" 1 2 outer="));
        assert!(TestSet::load(&mut tampered.as_bytes()).is_err());

        // probability that is no fraction of n̄ rows
        let tampered = text.replacen(" 1 3 outer=", " 1 7 outer=", 1);
        assert!(TestSet::load(&mut tampered.as_bytes()).is_err());
    }
}
