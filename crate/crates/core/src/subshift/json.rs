use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::pattern::{Alphabet, Pattern, HOLE};
use super::{Sidedness, SpecKind, SubshiftSpec};
use crate::error::{Error, Result};

#[derive(Serialize, Deserialize)]
struct SpecFile {
    alphabet: Vec<String>,
    dimension: usize,
    sided: String,
    kind: KindFile,
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
enum KindFile {
    Full { sub_alphabet: Vec<String> },
    Sft { forbidden: Vec<ForbiddenFile> },
    Substitution { box_dims: Vec<usize>, rules: BTreeMap<String, Value> },
    SinglePoint { symbol: String },
}

#[derive(Serialize, Deserialize)]
struct ForbiddenFile {
    offsets: Vec<Vec<i64>>,
    cells: Vec<String>,
}

fn parse_nested(v: &Value, dims: &[usize], alphabet: &Alphabet, out: &mut Vec<u8>) -> Result<()> {
    match dims.split_first() {
        None => {
            let tok = v
                .as_str()
                .ok_or_else(|| Error::input("substitution rule leaves must be symbol strings"))?;
            out.push(alphabet.parse_index(tok)?);
            Ok(())
        }
        Some((&n, rest)) => {
            // a bare string of single-character symbols is accepted on the innermost axis
            if rest.is_empty() {
                if let Some(s) = v.as_str() {
                    let w = alphabet.parse_word(s)?;
                    if w.len() != n {
                        return Err(Error::input("substitution rule row has the wrong length"));
                    }
                    out.extend(w);
                    return Ok(());
                }
            }
            let arr = v
                .as_array()
                .ok_or_else(|| Error::input("substitution rules must be nested arrays"))?;
            if arr.len() != n {
                return Err(Error::input("substitution rule shape differs from the declared box"));
            }
            for item in arr {
                parse_nested(item, rest, alphabet, out)?;
            }
            Ok(())
        }
    }
}

fn emit_nested(cells: &[u8], dims: &[usize], alphabet: &Alphabet) -> Value {
    match dims.split_first() {
        None => Value::String(alphabet.symbol(cells[0]).to_string()),
        Some((&n, rest)) => {
            let stride: usize = rest.iter().product();
            Value::Array(
                (0..n)
                    .map(|i| emit_nested(&cells[i * stride..(i + 1) * stride], rest, alphabet))
                    .collect(),
            )
        }
    }
}

/// Parse a spec from its JSON text and validate it.
pub fn parse_spec(text: &str) -> Result<SubshiftSpec> {
    let file: SpecFile = serde_json::from_str(text)?;
    let alphabet = Alphabet::new(file.alphabet)?;
    let sided = match file.sided.as_str() {
        "two" => Sidedness::Two,
        "one" => Sidedness::One,
        other => return Err(Error::input(format!("sided must be \"two\" or \"one\", got {other:?}"))),
    };
    let d = file.dimension;
    let kind = match file.kind {
        KindFile::Full { sub_alphabet } => SpecKind::FullShift {
            sub_alphabet: sub_alphabet
                .iter()
                .map(|s| alphabet.parse_index(s))
                .collect::<Result<_>>()?,
        },
        KindFile::SinglePoint { symbol } => SpecKind::SinglePoint {
            symbol: alphabet.parse_index(&symbol)?,
        },
        KindFile::Sft { forbidden } => {
            let mut pats = Vec::new();
            for f in forbidden {
                if f.offsets.len() != f.cells.len() {
                    return Err(Error::input("forbidden pattern offsets and cells differ in length"));
                }
                if f.offsets.iter().any(|o| o.len() != d) {
                    return Err(Error::input("forbidden pattern offset has the wrong dimension"));
                }
                let pts = f
                    .offsets
                    .into_iter()
                    .zip(&f.cells)
                    .map(|(o, c)| Ok((o, alphabet.parse_index(c)?)))
                    .collect::<Result<Vec<_>>>()?;
                pats.push(Pattern::from_cells(&pts)?);
            }
            SpecKind::Sft { forbidden: pats }
        }
        KindFile::Substitution { box_dims, rules } => {
            let mut out = Vec::with_capacity(alphabet.size());
            for sym in alphabet.symbols() {
                let v = rules
                    .get(sym)
                    .ok_or_else(|| Error::input(format!("no substitution rule for symbol {sym:?}")))?;
                let mut cells = Vec::new();
                parse_nested(v, &box_dims, &alphabet, &mut cells)?;
                out.push(Pattern::new(vec![0; box_dims.len()], box_dims.clone(), cells)?);
            }
            for key in rules.keys() {
                alphabet.parse_index(key)?;
            }
            SpecKind::Substitution {
                box_dims,
                rules: out,
            }
        }
    };
    let spec = SubshiftSpec {
        alphabet,
        dimension: d,
        sided,
        kind,
    };
    spec.validate()?;
    Ok(spec)
}

pub fn load_spec(path: impl AsRef<Path>) -> Result<SubshiftSpec> {
    parse_spec(&std::fs::read_to_string(path)?)
}

/// Canonical pretty-printed JSON for a spec.
pub fn spec_to_json(spec: &SubshiftSpec) -> String {
    let a = &spec.alphabet;
    let kind = match &spec.kind {
        SpecKind::FullShift { sub_alphabet } => KindFile::Full {
            sub_alphabet: sub_alphabet.iter().map(|&s| a.symbol(s).to_string()).collect(),
        },
        SpecKind::SinglePoint { symbol } => KindFile::SinglePoint {
            symbol: a.symbol(*symbol).to_string(),
        },
        SpecKind::Sft { forbidden } => KindFile::Sft {
            forbidden: forbidden
                .iter()
                .map(|p| {
                    let def = p.defined();
                    ForbiddenFile {
                        offsets: def.iter().map(|(o, _)| o.clone()).collect(),
                        cells: def.iter().map(|&(_, s)| a.symbol(s).to_string()).collect(),
                    }
                })
                .collect(),
        },
        SpecKind::Substitution { box_dims, rules } => KindFile::Substitution {
            box_dims: box_dims.clone(),
            rules: rules
                .iter()
                .enumerate()
                .map(|(i, r)| {
                    debug_assert!(!r.cells().contains(&HOLE));
                    (a.symbol(i as u8).to_string(), emit_nested(r.cells(), box_dims, a))
                })
                .collect(),
        },
    };
    let file = SpecFile {
        alphabet: a.symbols().to_vec(),
        dimension: spec.dimension,
        sided: match spec.sided {
            Sidedness::Two => "two".into(),
            Sidedness::One => "one".into(),
        },
        kind,
    };
    let mut s = serde_json::to_string_pretty(&file).expect("spec serializes");
    s.push('\n');
    s
}
