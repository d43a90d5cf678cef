//! Reed–Muller codes as subfield subcodes of Reed–Solomon codes, and the
//! two-step list decoder: RS-list-decode over the big field, then keep the
//! base-field candidates that pass the randomized membership test.
//!
//! For r = u(q−1)+s with 0 ≤ s < q−1, RM_q(r,m) of length N = q^m sits
//! inside RS_{q^m}(N, k) with k = q^m − q^(m−u−1)(q−s) + 1, and both codes
//! share the minimum distance D = q^(m−u−1)(q−s). The identification needs
//! the RS evaluation points in canonical packed order (see
//! [`LinearCode::rs_all_points`]), so that the j-th point of F_q^m and the
//! j-th element of F_{q^m} correspond under the basis 1, y, …, y^(m−1).
//!
//! The RS list decoder is pluggable; the provided implementation is an
//! exhaustive oracle for desk-scale parameters.

use std::collections::HashSet;
use std::sync::Arc;

use num::rational::Ratio;

use crate::code::LinearCode;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::Vector;
use crate::rng;
use crate::testset::TestSet;
use crate::verify::{determine_codeword, VerifierConfig};

/// The Reed-Muller ↔ Reed-Solomon parameter correspondence.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RmRsParams {
    pub q: u64,
    pub r: u32,
    pub m: u32,
    /// Quotient u in r = u(q−1) + s.
    pub deg_quot: u32,
    /// Remainder s in r = u(q−1) + s, 0 ≤ s < q−1.
    pub deg_rem: u32,
    /// Dimension k of the enclosing Reed–Solomon code.
    pub rs_dimension: usize,
    /// Shared minimum distance D.
    pub min_distance: usize,
    /// Code length N = q^m.
    pub length: usize,
}

/// Derived quantities for RM_q(r,m) viewed inside RS_{q^m}(q^m, k).
pub fn rm_rs_params(q: u64, r: u32, m: u32) -> Result<RmRsParams> {
    if q < 2 || m == 0 {
        return Err(Error::InvalidParams("need q ≥ 2 and m ≥ 1".into()));
    }
    if u64::from(r) > u64::from(m) * (q - 1) {
        return Err(Error::InvalidParams(format!(
            "degree r={r} exceeds m(q−1) = {}",
            u64::from(m) * (q - 1)
        )));
    }
    let deg_quot = (u64::from(r) / (q - 1)) as u32;
    let deg_rem = (u64::from(r) % (q - 1)) as u32;
    if deg_quot > m - 1 {
        return Err(Error::InvalidParams(format!(
            "degree r={r} leaves no Reed–Solomon dimension: need ⌊r/(q−1)⌋ ≤ m−1"
        )));
    }
    let length = (q as u128).pow(m);
    if length > 1 << 32 {
        return Err(Error::FieldTooLarge(length));
    }
    let length = length as usize;
    let min_distance = q.pow(m - deg_quot - 1) as usize * (q - u64::from(deg_rem)) as usize;
    let rs_dimension = length - min_distance + 1;
    Ok(RmRsParams {
        q,
        r,
        m,
        deg_quot,
        deg_rem,
        rs_dimension,
        min_distance,
        length,
    })
}

/// A list-decoding request: all codewords within relative distance `radius`
/// of `received`, up to `list_cap` of them.
#[derive(Debug, Clone)]
pub struct ListDecodeQuery {
    /// Received word over the code's field.
    pub received: Vector,
    /// Relative decoding radius ρ ∈ [0, 1).
    pub radius: Ratio<u64>,
    /// List size bound l.
    pub list_cap: usize,
}

/// Pluggable Reed–Solomon list decoder. The quasi-linear decoder slot is
/// declared by this trait; [`ExhaustiveListDecoder`] is the provided oracle.
pub trait RsListDecoder {
    /// Returns exactly {c ∈ code : wt(c − received) ≤ ρ·n}, in message-index
    /// order.
    fn list_decode(&self, code: &LinearCode, query: &ListDecodeQuery) -> Result<Vec<Vector>>;
}

/// Oracle decoder: enumerates every codeword and keeps those within the
/// radius. Exact, deterministic, and limited by the enumeration budget
/// (radius 0 short-circuits to a membership check).
#[derive(Debug, Default, Clone, Copy)]
pub struct ExhaustiveListDecoder;

impl RsListDecoder for ExhaustiveListDecoder {
    fn list_decode(&self, code: &LinearCode, query: &ListDecodeQuery) -> Result<Vec<Vector>> {
        if query.radius >= Ratio::new(1, 1) {
            return Err(Error::InvalidParams("radius must lie in [0,1)".into()));
        }
        let n = code.n();
        if query.received.len() != n || query.received.field() != code.field() {
            return Err(Error::DimensionMismatch(
                "received word must match the code".into(),
            ));
        }
        let num = *query.radius.numer() as u128;
        let den = *query.radius.denom() as u128;
        // wt ≤ ρ·n  ⇔  wt·den ≤ num·n
        let max_weight = (num * n as u128) / den;
        if max_weight == 0 {
            // radius below one symbol: the only candidate is the word itself
            return Ok(if code.contains(&query.received)? {
                vec![query.received.clone()]
            } else {
                vec![]
            });
        }
        let mut out = Vec::new();
        let received = query.received.as_slice();
        code.for_each_codeword(|cw| {
            let dist = cw
                .iter()
                .zip(received)
                .filter(|(a, b)| a != b)
                .count() as u128;
            if dist * den <= num * n as u128 {
                out.push(cw.to_vec());
            }
        })?;
        out.into_iter()
            .map(|cw| Vector::from_packed(code.field(), cw))
            .collect()
    }
}

/// Result of the two-step Reed–Muller list decode.
#[derive(Debug, Clone)]
pub struct RmListResult {
    /// Accepted base-field codeword candidates, in decoder order.
    pub list: Vec<Vector>,
    /// True when the candidate list was cut to the cap.
    pub truncated: bool,
}

/// The list-decode-then-verify pipeline for RM_q(r,m).
pub struct RmListDecoder {
    params: RmRsParams,
    base_field: Arc<Field>,
    rm_code: LinearCode,
    rs_code: LinearCode,
    test_set: TestSet,
    decoder: Box<dyn RsListDecoder>,
}

impl RmListDecoder {
    /// Builds the pipeline over the given plain field F_q: the Reed–Muller
    /// code, the enclosing Reed–Solomon code over F_{q^m} in the compatible
    /// point order, and an MDS test set for the Reed–Muller parity check
    /// (target probability 1/2, smallest workable extension degree).
    pub fn new(base_field: &Arc<Field>, r: u32, m: u32) -> Result<RmListDecoder> {
        let params = rm_rs_params(base_field.order(), r, m)?;
        let rm_code = LinearCode::reed_muller(base_field, r, m)?;
        debug_assert_eq!(rm_code.distance(), crate::code::Distance::Exact(params.min_distance));
        let rs_field = base_field.extend(m, None)?;
        let rs_code = LinearCode::rs_all_points(&rs_field, params.rs_dimension)?;
        let test_set = Self::auto_test_set(&rm_code)?;
        Ok(RmListDecoder {
            params,
            base_field: base_field.clone(),
            rm_code,
            rs_code,
            test_set,
            decoder: Box::new(ExhaustiveListDecoder),
        })
    }

    /// Swaps in a different RS list decoder implementation.
    pub fn with_decoder(mut self, decoder: Box<dyn RsListDecoder>) -> RmListDecoder {
        self.decoder = decoder;
        self
    }

    /// MDS test set with target probability 1/2 over the smallest extension
    /// degree that admits it.
    fn auto_test_set(rm_code: &LinearCode) -> Result<TestSet> {
        let h = rm_code.parity_check();
        let mut last_err = None;
        for u in 1..=16 {
            match TestSet::mds(h, Ratio::new(1, 2), u) {
                Ok(ts) => return Ok(ts),
                Err(e) => last_err = Some(e),
            }
        }
        Err(last_err.unwrap_or_else(|| Error::InvalidParams("no admissible extension degree".into())))
    }

    pub fn params(&self) -> &RmRsParams {
        &self.params
    }

    pub fn rm_code(&self) -> &LinearCode {
        &self.rm_code
    }

    pub fn rs_code(&self) -> &LinearCode {
        &self.rs_code
    }

    pub fn test_set(&self) -> &TestSet {
        &self.test_set
    }

    /// Step one of the pipeline: RS-list-decode the received word (embedded
    /// into F_{q^m}), keep the candidates whose coordinates all lie in F_q,
    /// deduplicate, and cut at the cap. Returns base-field vectors.
    pub fn rs_candidates(
        &self,
        received: &Vector,
        radius: Ratio<u64>,
        list_cap: usize,
    ) -> Result<(Vec<Vector>, bool)> {
        if received.len() != self.params.length || received.field() != &self.base_field {
            return Err(Error::DimensionMismatch(
                "received word must live over F_q with length q^m".into(),
            ));
        }
        let embedded = Vector::from_packed(
            self.rs_code.field(),
            received.as_slice().to_vec(),
        )?;
        let query = ListDecodeQuery {
            received: embedded,
            radius,
            list_cap,
        };
        let big_list = self.decoder.list_decode(&self.rs_code, &query)?;

        let q = self.base_field.order();
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        let mut truncated = false;
        for cand in big_list {
            if !cand.as_slice().iter().all(|&v| v < q) {
                continue; // not a base-field vector
            }
            if !seen.insert(cand.as_slice().to_vec()) {
                continue; // distinct RS codewords cannot collide, but stay safe
            }
            if out.len() == list_cap {
                truncated = true;
                break;
            }
            out.push(Vector::from_packed(&self.base_field, cand.as_slice().to_vec())?);
        }
        Ok((out, truncated))
    }

    /// Full pipeline: RS candidates, then the randomized membership test on
    /// each (candidate i runs with the seed derived from (cfg.seed, i)).
    /// Every true RM codeword within the radius is returned (the verifier
    /// never rejects codewords); a non-RM candidate survives with probability
    /// at most p^R each.
    pub fn decode(
        &self,
        received: &Vector,
        radius: Ratio<u64>,
        list_cap: usize,
        cfg: &VerifierConfig,
    ) -> Result<RmListResult> {
        let (candidates, truncated) = self.rs_candidates(received, radius, list_cap)?;
        let list = self.verify_candidates(&candidates, cfg)?;
        Ok(RmListResult { list, truncated })
    }

    /// Step two in isolation: filter candidates through the verifier.
    pub fn verify_candidates(
        &self,
        candidates: &[Vector],
        cfg: &VerifierConfig,
    ) -> Result<Vec<Vector>> {
        let mut list = Vec::new();
        for (i, cand) in candidates.iter().enumerate() {
            let cand_cfg = VerifierConfig {
                rounds: cfg.rounds,
                seed: rng::derive_seed(cfg.seed, i as u64),
                count_ops: cfg.count_ops,
            };
            if determine_codeword(cand, &self.test_set, &cand_cfg)?.accepted() {
                list.push(cand.clone());
            }
        }
        Ok(list)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Field;

    #[test]
    fn params_match_closed_forms() {
        let p = rm_rs_params(2, 1, 3).unwrap();
        assert_eq!((p.deg_quot, p.deg_rem), (1, 0));
        assert_eq!((p.rs_dimension, p.min_distance, p.length), (5, 4, 8));

        let p = rm_rs_params(3, 1, 2).unwrap();
        assert_eq!((p.deg_quot, p.deg_rem), (0, 1));
        assert_eq!((p.rs_dimension, p.min_distance, p.length), (4, 6, 9));

        let p = rm_rs_params(2, 2, 3).unwrap();
        assert_eq!((p.rs_dimension, p.min_distance, p.length), (7, 2, 8));

        // degree 0: repetition code, D = q^m
        let p = rm_rs_params(5, 0, 2).unwrap();
        assert_eq!((p.rs_dimension, p.min_distance), (1, 25));
    }

    #[test]
    fn params_satisfy_mds_identity() {
        // k + D = N + 1 whenever the parameters are valid
        for q in [2u64, 3, 4, 5] {
            for m in 1..=3u32 {
                for r in 0..(m * (q as u32 - 1)) {
                    let Ok(p) = rm_rs_params(q, r, m) else { continue };
                    assert_eq!(
                        p.rs_dimension + p.min_distance,
                        p.length + 1,
                        "q={q} r={r} m={m}"
                    );
                }
            }
        }
    }

    #[test]
    fn params_reject_out_of_range_degrees() {
        assert!(rm_rs_params(2, 4, 3).is_err()); // r > m(q−1)
        assert!(rm_rs_params(2, 3, 3).is_err()); // full space: ⌊r/(q−1)⌋ = m
        assert!(rm_rs_params(3, 1, 0).is_err());
    }

    #[test]
    fn params_distance_matches_exhaustive_rm_distance() {
        for (q, r, m) in [(2u64, 1u32, 3u32), (2, 2, 3), (3, 1, 2), (2, 1, 4), (2, 2, 4), (3, 2, 2)] {
            let f = Field::base(if q == 4 { 2 } else { q }, if q == 4 { 2 } else { 1 }, None).unwrap();
            let p = rm_rs_params(q, r, m).unwrap();
            let rm = LinearCode::reed_muller(&f, r, m).unwrap();
            assert_eq!(
                rm.min_distance_exhaustive().unwrap(),
                p.min_distance,
                "RM_{q}({r},{m})"
            );
        }
    }

    #[test]
    fn rm_is_subfield_subcode_with_equal_distance() {
        // the containment, exhaustively: RM_q(r,m) ⊆ SSC(RS(q^m, k), F_q), both
        // with minimum distance exactly D
        for (q, r, m) in [(2u64, 1u32, 3u32), (2, 2, 3), (3, 1, 2), (2, 1, 4), (2, 2, 4)] {
            let base = Field::base(q, 1, None).unwrap();
            let p = rm_rs_params(q, r, m).unwrap();
            let rm = LinearCode::reed_muller(&base, r, m).unwrap();
            let rs_field = base.extend(m, None).unwrap();
            let rs = LinearCode::rs_all_points(&rs_field, p.rs_dimension).unwrap();
            let ssc = rs.subfield_subcode(&base).unwrap();

            let mut all_contained = true;
            rm.for_each_codeword(|cw| {
                let v = Vector::from_packed(&base, cw.to_vec()).unwrap();
                if !ssc.contains(&v).unwrap() {
                    all_contained = false;
                }
            })
            .unwrap();
            assert!(all_contained, "RM_{q}({r},{m}) ⊄ subfield subcode");

            assert_eq!(rm.min_distance_exhaustive().unwrap(), p.min_distance);
            assert_eq!(
                ssc.min_distance_exhaustive().unwrap(),
                p.min_distance,
                "subfield subcode distance differs at ({q},{r},{m})"
            );
        }
    }

    #[test]
    fn exhaustive_decoder_radius_zero() {
        let f = Field::base(2, 3, None).unwrap();
        let code = LinearCode::rs(&f, 7, 3).unwrap();
        let msg = Vector::from_packed(&f, vec![1, 2, 3]).unwrap();
        let cw = code.encode(&msg).unwrap();
        let dec = ExhaustiveListDecoder;
        let hits = dec
            .list_decode(
                &code,
                &ListDecodeQuery {
                    received: cw.clone(),
                    radius: Ratio::new(0, 1),
                    list_cap: 8,
                },
            )
            .unwrap();
        assert_eq!(hits, vec![cw.clone()]);

        // a non-codeword at radius zero decodes to nothing
        let mut data = cw.as_slice().to_vec();
        data[0] ^= 1;
        let off = Vector::from_packed(&f, data).unwrap();
        let hits = dec
            .list_decode(
                &code,
                &ListDecodeQuery {
                    received: off,
                    radius: Ratio::new(0, 1),
                    list_cap: 8,
                },
            )
            .unwrap();
        assert!(hits.is_empty());
    }

    #[test]
    fn exhaustive_decoder_unique_radius_is_singleton() {
        let f = Field::base(2, 3, None).unwrap();
        let code = LinearCode::rs(&f, 7, 3).unwrap(); // d = 5, unique radius 2
        let msg = Vector::from_packed(&f, vec![5, 0, 7]).unwrap();
        let cw = code.encode(&msg).unwrap();
        let mut data = cw.as_slice().to_vec();
        data[2] ^= 3;
        data[5] ^= 6;
        let received = Vector::from_packed(&f, data).unwrap();
        let hits = ExhaustiveListDecoder
            .list_decode(
                &code,
                &ListDecodeQuery {
                    received,
                    radius: Ratio::new(2, 7),
                    list_cap: 8,
                },
            )
            .unwrap();
        assert_eq!(hits, vec![cw]);
    }

    #[test]
    fn exhaustive_decoder_returns_deep_hole_pair() {
        // RS(7,2) over GF(8) has d = 6; splice two codewords into a word at
        // distance 3 from both
        let f = Field::base(2, 3, None).unwrap();
        let code = LinearCode::rs(&f, 7, 2).unwrap();
        let c1 = code.encode(&Vector::from_packed(&f, vec![1, 1]).unwrap()).unwrap();
        let c2 = code.encode(&Vector::from_packed(&f, vec![4, 2]).unwrap()).unwrap();
        let diff: Vec<usize> = (0..7).filter(|&j| c1.at(j) != c2.at(j)).collect();
        assert_eq!(diff.len(), 6, "distinct messages give distance ≥ d = 6");
        let mut data = c1.as_slice().to_vec();
        for &j in diff.iter().take(3) {
            data[j] = c2.at(j);
        }
        let received = Vector::from_packed(&f, data).unwrap();
        let hits = ExhaustiveListDecoder
            .list_decode(
                &code,
                &ListDecodeQuery {
                    received,
                    radius: Ratio::new(3, 7),
                    list_cap: 64,
                },
            )
            .unwrap();
        assert!(hits.contains(&c1));
        assert!(hits.contains(&c2));
    }

    #[test]
    fn pipeline_returns_codeword_at_radius_zero() {
        let f2 = Field::prime(2).unwrap();
        let dec = RmListDecoder::new(&f2, 1, 3).unwrap();
        let rm = dec.rm_code();
        let msg = Vector::from_packed(&f2, vec![1, 0, 1, 1]).unwrap();
        let cw = rm.encode(&msg).unwrap();
        let res = dec
            .decode(&cw, Ratio::new(0, 1), 8, &VerifierConfig::new(10, 3))
            .unwrap();
        assert_eq!(res.list, vec![cw]);
        assert!(!res.truncated);
    }

    #[test]
    fn pipeline_corrects_single_errors() {
        // D = 4: one flipped bit stays within half the distance
        let f2 = Field::prime(2).unwrap();
        let dec = RmListDecoder::new(&f2, 1, 3).unwrap();
        let rm = dec.rm_code();
        let msg = Vector::from_packed(&f2, vec![0, 1, 1, 0]).unwrap();
        let cw = rm.encode(&msg).unwrap();
        for j in 0..8 {
            let mut data = cw.as_slice().to_vec();
            data[j] ^= 1;
            let received = Vector::from_packed(&f2, data).unwrap();
            let res = dec
                .decode(&received, Ratio::new(1, 8), 8, &VerifierConfig::new(12, j as u64))
                .unwrap();
            assert!(res.list.contains(&cw), "flip at {j} lost the codeword");
        }
    }

    #[test]
    fn pipeline_rejects_rs_words_outside_rm() {
        // At small binary parameters the subfield subcode coincides with RM
        // (no gap words exist); record that, then take a known gap instance:
        // over GF(3) with (r,m) = (2,3) the subcode is strictly larger.
        let f2 = Field::prime(2).unwrap();
        for (r, m) in [(1u32, 3u32), (2, 4)] {
            let dec = RmListDecoder::new(&f2, r, m).unwrap();
            let ssc = dec.rs_code().subfield_subcode(&f2).unwrap();
            assert_eq!(ssc.k(), dec.rm_code().k(), "no gap at (2,{r},{m})");
        }

        let f3 = Field::prime(3).unwrap();
        let dec = RmListDecoder::new(&f3, 2, 3).unwrap();
        let rm = dec.rm_code();
        let ssc = dec.rs_code().subfield_subcode(&f3).unwrap();
        assert!(ssc.k() > rm.k(), "gap expected at (3,2,3)");
        // some basis row of the larger subcode must avoid RM
        let gap_word = (0..ssc.k())
            .map(|i| ssc.generator().row(i))
            .find(|row| !rm.contains(row).unwrap())
            .expect("strictly larger subcode has a non-RM basis row");

        // the gap word is an RS codeword, so radius 0 always returns it as a
        // candidate; the verifier must throw it out (up to p^R)
        for seed in 0..20 {
            let res = dec
                .decode(&gap_word, Ratio::new(0, 1), 8, &VerifierConfig::new(40, seed))
                .unwrap();
            assert!(res.list.is_empty(), "non-RM word slipped through at seed {seed}");
        }
    }

    #[test]
    fn candidate_list_is_capped_with_flag() {
        let f2 = Field::prime(2).unwrap();
        let dec = RmListDecoder::new(&f2, 1, 3).unwrap();
        let zero = Vector::zeros(&f2, 8);
        // radius 1/2 over RM(1,3): plenty of RS codewords within distance 4
        let (list, truncated) = dec.rs_candidates(&zero, Ratio::new(1, 2), 3).unwrap();
        assert_eq!(list.len(), 3);
        assert!(truncated);
    }
}
