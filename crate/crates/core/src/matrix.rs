//! Assembly and serialization of the period matrix [p_{i+j}] with rows
//! indexed by I_{(n/2)d-n-2} and columns by I_d.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::combinatorics::{enumerate_index_set, ExponentIndex, FermatParams};
use crate::cyclotomic::CycElt;
use crate::periods::{self, DegreeVector};
use crate::{Error, LinearCycle};

/// Which period function fills the matrix entries.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Provenance {
    /// The fixed pair of linear cycles intersecting in P^m.
    LinearPair { m: i64 },
    /// A complete-intersection cycle with the given degrees and root sets.
    CompleteIntersection { degrees: DegreeVector },
    /// A single linear cycle (a, b).
    SingleCycle { a: Vec<u32>, b: Vec<u32> },
}

/// Dense period matrix over Z[ζ_{2d}], plus the informational global scalar
/// that was factored out of the entries.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PeriodMatrix {
    pub params: FermatParams,
    pub provenance: Provenance,
    pub row_index: Vec<ExponentIndex>,
    pub col_index: Vec<ExponentIndex>,
    /// Row-major entries, length rows x cols.
    pub entries: Vec<CycElt>,
    pub global_scalar: BigRational,
}

impl PeriodMatrix {
    pub fn rows(&self) -> usize {
        self.row_index.len()
    }

    pub fn cols(&self) -> usize {
        self.col_index.len()
    }

    pub fn entry(&self, r: usize, c: usize) -> &CycElt {
        &self.entries[r * self.cols() + c]
    }
}

/// Evaluate the provenance's period at a combined index i + j. The total
/// degree of row + column indices is always (n/2+1)d - n - 2; components
/// exceeding d-2 land in the vanishing branch automatically.
pub fn period_entry(
    params: FermatParams,
    provenance: &Provenance,
    combined: &ExponentIndex,
) -> Result<CycElt, Error> {
    match provenance {
        Provenance::LinearPair { m } => Ok(periods::pair_period(params, *m, combined)?.normalized),
        Provenance::CompleteIntersection { degrees } => {
            Ok(periods::ci_period(params, degrees, combined))
        }
        Provenance::SingleCycle { a, b } => {
            let cycle = LinearCycle::new(a.clone(), b.clone())?;
            if combined.total() != params.period_degree() {
                return Ok(CycElt::zero(params.zeta_order()));
            }
            Ok(periods::linear_cycle_period(params, &cycle, combined)?.normalized)
        }
    }
}

/// Materialize the full matrix. Entry computation is pure per entry, so rows
/// are filled in parallel; the result is identical for any worker count.
pub fn build_matrix(params: FermatParams, provenance: Provenance) -> Result<PeriodMatrix, Error> {
    validate_provenance(params, &provenance)?;
    let row_index = enumerate_index_set(params, params.row_degree());
    let col_index = enumerate_index_set(params, params.d as i64);
    let entries: Result<Vec<Vec<CycElt>>, Error> = row_index
        .par_iter()
        .map(|i| {
            col_index
                .iter()
                .map(|j| period_entry(params, &provenance, &i.plus(j)))
                .collect()
        })
        .collect();
    let entries = entries?.into_iter().flatten().collect();
    let global_scalar = match &provenance {
        Provenance::CompleteIntersection { .. } => BigRational::one(),
        _ => periods::global_scalar(params),
    };
    Ok(PeriodMatrix {
        params,
        provenance,
        row_index,
        col_index,
        entries,
        global_scalar,
    })
}

fn validate_provenance(params: FermatParams, provenance: &Provenance) -> Result<(), Error> {
    match provenance {
        Provenance::LinearPair { m } => {
            periods::pair_cycles(params, *m)?;
        }
        Provenance::CompleteIntersection { degrees } => {
            DegreeVector::with_root_sets(params, degrees.degrees.clone(), degrees.root_sets.clone())?;
        }
        Provenance::SingleCycle { a, b } => {
            LinearCycle::new(a.clone(), b.clone())?;
        }
    }
    Ok(())
}

#[derive(Serialize, Deserialize)]
struct MatrixWire {
    n: u32,
    d: u32,
    provenance: Provenance,
    rows: Vec<Vec<u32>>,
    cols: Vec<Vec<u32>>,
    entries: Vec<Vec<CycElt>>,
    scalar: String,
}

impl PeriodMatrix {
    fn to_wire(&self) -> MatrixWire {
        MatrixWire {
            n: self.params.n,
            d: self.params.d,
            provenance: self.provenance.clone(),
            rows: self.row_index.iter().map(|i| i.0.clone()).collect(),
            cols: self.col_index.iter().map(|j| j.0.clone()).collect(),
            entries: self
                .entries
                .chunks(self.cols().max(1))
                .map(|row| row.to_vec())
                .collect(),
            scalar: format!("{}/{}", self.global_scalar.numer(), self.global_scalar.denom()),
        }
    }

    fn from_wire(w: MatrixWire) -> Result<Self, Error> {
        let params = FermatParams::new(w.n, w.d)?;
        let rows: Vec<ExponentIndex> = w.rows.into_iter().map(ExponentIndex).collect();
        let cols: Vec<ExponentIndex> = w.cols.into_iter().map(ExponentIndex).collect();
        if w.entries.len() != rows.len() {
            return Err(Error::Parse {
                position: "entries".into(),
                message: format!("{} entry rows for {} row indices", w.entries.len(), rows.len()),
            });
        }
        let mut entries = Vec::with_capacity(rows.len() * cols.len());
        for (r, row) in w.entries.into_iter().enumerate() {
            if row.len() != cols.len() {
                return Err(Error::Parse {
                    position: format!("entries[{r}]"),
                    message: format!("{} entries for {} column indices", row.len(), cols.len()),
                });
            }
            for (c, e) in row.iter().enumerate() {
                if e.order() != params.zeta_order() {
                    return Err(Error::Parse {
                        position: format!("entries[{r}][{c}]"),
                        message: format!("order {} does not match 2d = {}", e.order(), params.zeta_order()),
                    });
                }
            }
            entries.extend(row);
        }
        let scalar = parse_scalar(&w.scalar)?;
        Ok(PeriodMatrix {
            params,
            provenance: w.provenance,
            row_index: rows,
            col_index: cols,
            entries,
            global_scalar: scalar,
        })
    }

    pub fn dump_json(&self) -> Vec<u8> {
        serde_json::to_vec(&self.to_wire()).expect("matrix serialization cannot fail")
    }

    pub fn load_json(bytes: &[u8]) -> Result<Self, Error> {
        let wire: MatrixWire = serde_json::from_slice(bytes).map_err(|e| Error::Parse {
            position: format!("line {} column {}", e.line(), e.column()),
            message: e.to_string(),
        })?;
        Self::from_wire(wire)
    }

    /// Tab-separated dump: `#` header lines carrying the JSON metadata, then
    /// one line per matrix row with entries as comma-joined coefficient lists.
    pub fn dump_tsv(&self) -> Vec<u8> {
        let mut out = String::new();
        out.push_str(&format!("# n\t{}\n", self.params.n));
        out.push_str(&format!("# d\t{}\n", self.params.d));
        out.push_str(&format!(
            "# provenance\t{}\n",
            serde_json::to_string(&self.provenance).unwrap()
        ));
        out.push_str(&format!(
            "# rows\t{}\n",
            serde_json::to_string(&self.row_index).unwrap()
        ));
        out.push_str(&format!(
            "# cols\t{}\n",
            serde_json::to_string(&self.col_index).unwrap()
        ));
        out.push_str(&format!(
            "# scalar\t{}/{}\n",
            self.global_scalar.numer(),
            self.global_scalar.denom()
        ));
        for r in 0..self.rows() {
            let line: Vec<String> = (0..self.cols())
                .map(|c| {
                    self.entry(r, c)
                        .coeffs()
                        .iter()
                        .map(|v| v.to_string())
                        .collect::<Vec<_>>()
                        .join(",")
                })
                .collect();
            out.push_str(&line.join("\t"));
            out.push('\n');
        }
        out.into_bytes()
    }

    pub fn load_tsv(bytes: &[u8]) -> Result<Self, Error> {
        let text = std::str::from_utf8(bytes).map_err(|e| Error::Parse {
            position: format!("byte {}", e.valid_up_to()),
            message: "not valid UTF-8".into(),
        })?;
        let mut n = None;
        let mut d = None;
        let mut provenance = None;
        let mut rows = None;
        let mut cols: Option<Vec<ExponentIndex>> = None;
        let mut scalar = None;
        let mut entries: Vec<CycElt> = Vec::new();
        let mut data_rows = 0usize;
        for (lineno, line) in text.lines().enumerate() {
            let at = |msg: String| Error::Parse {
                position: format!("line {}", lineno + 1),
                message: msg,
            };
            if let Some(rest) = line.strip_prefix("# ") {
                let (key, value) = rest
                    .split_once('\t')
                    .ok_or_else(|| at("malformed header line".into()))?;
                match key {
                    "n" => n = Some(value.parse::<u32>().map_err(|e| at(e.to_string()))?),
                    "d" => d = Some(value.parse::<u32>().map_err(|e| at(e.to_string()))?),
                    "provenance" => {
                        provenance = Some(serde_json::from_str(value).map_err(|e| at(e.to_string()))?)
                    }
                    "rows" => rows = Some(serde_json::from_str(value).map_err(|e| at(e.to_string()))?),
                    "cols" => cols = Some(serde_json::from_str(value).map_err(|e| at(e.to_string()))?),
                    "scalar" => scalar = Some(value.to_string()),
                    _ => return Err(at(format!("unknown header key {key:?}"))),
                }
            } else {
                if line.is_empty() {
                    continue;
                }
                let d = d.ok_or_else(|| at("data before `# d` header".into()))?;
                let cols = cols.as_ref().ok_or_else(|| at("data before `# cols` header".into()))?;
                let cells: Vec<&str> = line.split('\t').collect();
                if cells.len() != cols.len() {
                    return Err(at(format!("{} entries, expected {}", cells.len(), cols.len())));
                }
                for cell in cells {
                    let coeffs = cell
                        .split(',')
                        .map(|v| v.parse::<BigInt>())
                        .collect::<Result<Vec<_>, _>>()
                        .map_err(|e| at(e.to_string()))?;
                    entries.push(CycElt::from_coeffs(2 * d, coeffs).map_err(|e| at(e.to_string()))?);
                }
                data_rows += 1;
            }
        }
        let miss = |what: &str| Error::Parse {
            position: "header".into(),
            message: format!("missing `# {what}` line"),
        };
        let params = FermatParams::new(n.ok_or_else(|| miss("n"))?, d.ok_or_else(|| miss("d"))?)?;
        let rows: Vec<ExponentIndex> = rows.ok_or_else(|| miss("rows"))?;
        let cols = cols.ok_or_else(|| miss("cols"))?;
        if data_rows != rows.len() {
            return Err(Error::Parse {
                position: "body".into(),
                message: format!("{data_rows} data rows for {} row indices", rows.len()),
            });
        }
        Ok(PeriodMatrix {
            params,
            provenance: provenance.ok_or_else(|| miss("provenance"))?,
            row_index: rows,
            col_index: cols,
            entries,
            global_scalar: parse_scalar(&scalar.ok_or_else(|| miss("scalar"))?)?,
        })
    }
}

fn parse_scalar(s: &str) -> Result<BigRational, Error> {
    let bad = |m: String| Error::Parse {
        position: "scalar".into(),
        message: m,
    };
    let (num, den) = s.split_once('/').ok_or_else(|| bad(format!("expected p/q, got {s:?}")))?;
    let num: BigInt = num.parse().map_err(|e| bad(format!("{e}")))?;
    let den: BigInt = den.parse().map_err(|e| bad(format!("{e}")))?;
    if den == BigInt::from(0) {
        return Err(bad("zero denominator".into()));
    }
    Ok(BigRational::new(num, den))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;

    fn p(n: u32, d: u32) -> FermatParams {
        FermatParams::new(n, d).unwrap()
    }

    #[test]
    fn shapes() {
        let m = build_matrix(p(2, 5), Provenance::LinearPair { m: -1 }).unwrap();
        assert_eq!((m.rows(), m.cols()), (4, 40));

        let m = build_matrix(p(2, 3), Provenance::LinearPair { m: -1 }).unwrap();
        assert_eq!((m.rows(), m.cols()), (0, 4));

        let dv = DegreeVector::canonical(p(6, 4), vec![1, 1, 1, 1]).unwrap();
        let m = build_matrix(p(6, 4), Provenance::CompleteIntersection { degrees: dv }).unwrap();
        assert_eq!((m.rows(), m.cols()), (266, 266));
    }

    #[test]
    fn zero_pattern_follows_pair_sums() {
        let params = p(2, 5);
        let m = build_matrix(params, Provenance::LinearPair { m: 0 }).unwrap();
        for (r, i) in m.row_index.iter().enumerate() {
            for (c, j) in m.col_index.iter().enumerate() {
                let sum = i.plus(j);
                let bad_pair = (0..params.vars() / 2)
                    .any(|l| sum.0[2 * l] + sum.0[2 * l + 1] > params.d - 2);
                if bad_pair {
                    assert!(m.entry(r, c).is_zero(), "entry ({r},{c})");
                }
            }
        }
    }

    #[test]
    fn json_round_trip_and_determinism() {
        let m = build_matrix(p(2, 5), Provenance::LinearPair { m: -1 }).unwrap();
        let bytes = m.dump_json();
        assert_eq!(bytes, m.dump_json());
        let back = PeriodMatrix::load_json(&bytes).unwrap();
        assert_eq!(m, back);

        let rebuilt = build_matrix(p(2, 5), Provenance::LinearPair { m: -1 }).unwrap();
        assert_eq!(bytes, rebuilt.dump_json());
    }

    #[test]
    fn tsv_round_trip() {
        let dv = DegreeVector::canonical(p(2, 4), vec![1, 2]).unwrap();
        let m = build_matrix(p(2, 4), Provenance::CompleteIntersection { degrees: dv }).unwrap();
        let back = PeriodMatrix::load_tsv(&m.dump_tsv()).unwrap();
        assert_eq!(m, back);
    }

    #[test]
    fn degenerate_dump_is_valid() {
        let m = build_matrix(p(2, 3), Provenance::LinearPair { m: -1 }).unwrap();
        assert_eq!(m.rows(), 0);
        let back = PeriodMatrix::load_json(&m.dump_json()).unwrap();
        assert_eq!(m, back);
        let back = PeriodMatrix::load_tsv(&m.dump_tsv()).unwrap();
        assert_eq!(m, back);
    }

    #[test]
    fn truncated_input_is_rejected_with_position() {
        let m = build_matrix(p(2, 5), Provenance::LinearPair { m: -1 }).unwrap();
        let bytes = m.dump_json();
        let err = PeriodMatrix::load_json(&bytes[..bytes.len() / 2]).unwrap_err();
        assert!(matches!(err, Error::Parse { .. }));
        let tsv = m.dump_tsv();
        let err = PeriodMatrix::load_tsv(&tsv[..tsv.len() - 20]).unwrap_err();
        assert!(matches!(err, Error::Parse { .. }));
    }

    #[test]
    fn single_cycle_provenance() {
        let params = p(2, 3);
        let m = build_matrix(
            params,
            Provenance::SingleCycle { a: vec![0, 0], b: vec![0, 1, 2, 3] },
        )
        .unwrap();
        assert_eq!((m.rows(), m.cols()), (0, 4));
        assert!(!m.global_scalar.is_zero());
    }
}
