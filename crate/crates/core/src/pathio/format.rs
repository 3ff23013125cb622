use serde::{Deserialize, Serialize};

use crate::config::ToleranceConfig;
use crate::diagonal::DiagonalVector;
use crate::error::{Error, Result};
use crate::frames::Frame;
use crate::linalg::{Field, Matrix, C64};
use crate::path::{OperatorPath, PathKind, Piece};

pub const SCHEMA_VERSION: u32 = 1;

fn parse_err(location: impl Into<String>, message: impl Into<String>) -> Error {
    Error::Parse {
        location: location.into(),
        message: message.into(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct MatrixWire {
    rows: usize,
    cols: usize,
    field: Field,
    entries: Vec<[f64; 2]>,
}

impl MatrixWire {
    fn from_matrix(m: &Matrix) -> Self {
        Self {
            rows: m.rows(),
            cols: m.cols(),
            field: m.field(),
            entries: m.data().iter().map(|z| [z.re, z.im]).collect(),
        }
    }

    fn into_matrix(self, location: &str) -> Result<Matrix> {
        if self.entries.len() != self.rows * self.cols {
            return Err(parse_err(
                location,
                format!("{}x{} matrix needs {} entries, got {}", self.rows, self.cols, self.rows * self.cols, self.entries.len()),
            ));
        }
        if self.field == Field::Real && self.entries.iter().any(|e| e[1] != 0.0) {
            return Err(parse_err(location, "real matrix has a non-zero imaginary part"));
        }
        let data = self.entries.iter().map(|e| C64::new(e[0], e[1])).collect();
        Ok(Matrix::from_complex(self.rows, self.cols, data)?.into_field(self.field))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
enum PieceWire {
    Affine { start: MatrixWire, end: MatrixWire },
    Sampled { samples: Vec<SampleWire> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct SampleWire {
    t: f64,
    m: MatrixWire,
}

/// Metadata stored with a path.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PathHeader {
    pub kind: String,
    pub n: usize,
    pub field: Field,
    pub fixed_diagonal: Vec<[f64; 2]>,
    pub tolerances: ToleranceConfig,
    #[serde(default)]
    pub seed: Option<u64>,
}

/// On-disk form of an [`OperatorPath`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PathFile {
    pub v: u32,
    pub header: PathHeader,
    pieces: Vec<PieceWire>,
}

impl PathFile {
    pub fn new(path: &OperatorPath, tolerances: ToleranceConfig, seed: Option<u64>) -> Self {
        let field = path
            .pieces
            .iter()
            .flat_map(|p| match p {
                Piece::Affine { start, end } => vec![start.field(), end.field()],
                Piece::Sampled { samples } => samples.iter().map(|(_, m)| m.field()).collect(),
            })
            .fold(path.fixed_diagonal.field(), Field::join);
        let pieces = path
            .pieces
            .iter()
            .map(|p| match p {
                Piece::Affine { start, end } => PieceWire::Affine {
                    start: MatrixWire::from_matrix(start),
                    end: MatrixWire::from_matrix(end),
                },
                Piece::Sampled { samples } => PieceWire::Sampled {
                    samples: samples
                        .iter()
                        .map(|(t, m)| SampleWire {
                            t: *t,
                            m: MatrixWire::from_matrix(m),
                        })
                        .collect(),
                },
            })
            .collect();
        Self {
            v: SCHEMA_VERSION,
            header: PathHeader {
                kind: path.kind.name().to_string(),
                n: path.fixed_diagonal.len(),
                field,
                fixed_diagonal: path.fixed_diagonal.entries().iter().map(|z| [z.re, z.im]).collect(),
                tolerances,
                seed,
            },
            pieces,
        }
    }

    pub fn into_path(self) -> Result<OperatorPath> {
        if self.v != SCHEMA_VERSION {
            return Err(parse_err("v", format!("unsupported schema version {}", self.v)));
        }
        let h = self.header;
        let kind: PathKind = h.kind.parse().map_err(|_| parse_err("header.kind", format!("unknown kind {:?}", h.kind)))?;
        if h.fixed_diagonal.len() != h.n {
            return Err(parse_err("header.fixed_diagonal", format!("expected {} entries", h.n)));
        }
        let entries = h.fixed_diagonal.iter().map(|e| C64::new(e[0], e[1])).collect();
        let mut path = OperatorPath::new(kind, DiagonalVector::new(entries).with_field(h.field));
        for (i, piece) in self.pieces.into_iter().enumerate() {
            let piece = match piece {
                PieceWire::Affine { start, end } => Piece::Affine {
                    start: start.into_matrix(&format!("pieces[{i}].start"))?,
                    end: end.into_matrix(&format!("pieces[{i}].end"))?,
                },
                PieceWire::Sampled { samples } => Piece::Sampled {
                    samples: samples
                        .into_iter()
                        .enumerate()
                        .map(|(j, s)| Ok((s.t, s.m.into_matrix(&format!("pieces[{i}].samples[{j}].m"))?)))
                        .collect::<Result<_>>()?,
                },
            };
            for m in [piece.start(), piece.end()] {
                if m.shape() != (h.n, h.n) {
                    return Err(parse_err(format!("pieces[{i}]"), format!("matrix shape {:?} but n = {}", m.shape(), h.n)));
                }
            }
            path.pieces.push(piece);
        }
        Ok(path)
    }
}

pub fn path_to_json(path: &OperatorPath, tolerances: ToleranceConfig, seed: Option<u64>) -> Result<String> {
    Ok(serde_json::to_string(&PathFile::new(path, tolerances, seed))?)
}

/// Parse a path file; also returns the header.
pub fn path_from_json(s: &str) -> Result<(PathHeader, OperatorPath)> {
    let file: PathFile = serde_json::from_str(s)?;
    let header = file.header.clone();
    Ok((header, file.into_path()?))
}

pub fn matrix_to_json(m: &Matrix) -> Result<String> {
    Ok(serde_json::to_string(&MatrixWire::from_matrix(m))?)
}

pub fn matrix_from_json(s: &str) -> Result<Matrix> {
    let wire: MatrixWire = serde_json::from_str(s)?;
    wire.into_matrix("matrix")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct FrameWire {
    n: usize,
    k: usize,
    field: Field,
    vectors: Vec<Vec<[f64; 2]>>,
}

pub fn frame_to_json(f: &Frame) -> Result<String> {
    let wire = FrameWire {
        n: f.n,
        k: f.k,
        field: f.field,
        vectors: f.vectors.iter().map(|v| v.iter().map(|z| [z.re, z.im]).collect()).collect(),
    };
    Ok(serde_json::to_string(&wire)?)
}

pub fn frame_from_json(s: &str) -> Result<Frame> {
    let wire: FrameWire = serde_json::from_str(s)?;
    if wire.vectors.len() != wire.k {
        return Err(parse_err("vectors", format!("expected {} vectors, got {}", wire.k, wire.vectors.len())));
    }
    if let Some(j) = wire.vectors.iter().position(|v| v.len() != wire.n) {
        return Err(parse_err(format!("vectors[{j}]"), format!("expected length {}", wire.n)));
    }
    if wire.field == Field::Real && wire.vectors.iter().flatten().any(|e| e[1] != 0.0) {
        return Err(parse_err("vectors", "real frame has a non-zero imaginary part"));
    }
    let vectors = wire
        .vectors
        .iter()
        .map(|v| v.iter().map(|e| C64::new(e[0], e[1])).collect())
        .collect();
    let mut f = Frame::new(vectors, wire.field)?;
    f.field = wire.field;
    Ok(f)
}

/// `re+imj` literal.
pub fn format_complex(z: C64) -> String {
    let sign = if z.im.is_sign_negative() { '-' } else { '+' };
    format!("{}{}{}j", z.re, sign, z.im.abs())
}

/// Parses `1.5`, `-2j`, `0.5+0.25j`, `1e-3-2e-1j`.
pub fn parse_complex(s: &str) -> Result<C64> {
    let s = s.trim();
    let bad = || parse_err(format!("{s:?}"), "expected a real number or re+imj");
    let Some(body) = s.strip_suffix(['j', 'i']) else {
        return s.parse::<f64>().map(|x| C64::new(x, 0.0)).map_err(|_| bad());
    };
    let split = body
        .char_indices()
        .skip(1)
        .filter(|&(i, c)| (c == '+' || c == '-') && !matches!(body.as_bytes()[i - 1], b'e' | b'E'))
        .map(|(i, _)| i)
        .last();
    let (re, im) = match split {
        Some(i) => (&body[..i], &body[i..]),
        None => ("0", body),
    };
    let im = match im {
        "" | "+" => "1",
        "-" => "-1",
        x => x,
    };
    let re: f64 = re.parse().map_err(|_| bad())?;
    let im: f64 = im.trim_start_matches('+').parse().map_err(|_| bad())?;
    Ok(C64::new(re, im))
}

/// Diagonal from a JSON array (numbers or `[re, im]` pairs) or from
/// comma/whitespace separated values (numbers or `re+imj`).
pub fn parse_diagonal(s: &str) -> Result<DiagonalVector> {
    let t = s.trim();
    if t.starts_with('[') {
        let v: serde_json::Value = serde_json::from_str(t)?;
        let items = v.as_array().ok_or_else(|| parse_err("diagonal", "expected an array"))?;
        let entries = items
            .iter()
            .enumerate()
            .map(|(i, x)| {
                let z = match x {
                    serde_json::Value::Number(n) => n.as_f64().map(|r| C64::new(r, 0.0)),
                    serde_json::Value::Array(p) if p.len() == 2 => p[0].as_f64().zip(p[1].as_f64()).map(|(a, b)| C64::new(a, b)),
                    _ => None,
                };
                z.ok_or_else(|| parse_err(format!("diagonal[{i}]"), "expected a number or [re, im]"))
            })
            .collect::<Result<Vec<_>>>()?;
        return Ok(DiagonalVector::new(entries));
    }
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(t.as_bytes());
    let mut entries = Vec::new();
    for (line, record) in reader.records().enumerate() {
        let record = record.map_err(|e| parse_err(format!("line {}", line + 1), e.to_string()))?;
        for field in record.iter().flat_map(str::split_whitespace) {
            entries.push(parse_complex(field)?);
        }
    }
    if entries.is_empty() {
        return Err(parse_err("diagonal", "no entries"));
    }
    Ok(DiagonalVector::new(entries))
}
