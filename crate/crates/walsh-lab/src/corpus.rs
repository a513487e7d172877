//! Named test functions and the textual spec grammar that generates them.
//!
//! Grammar (one function per spec string):
//!
//!   const:<c>              constant c
//!   walsh:<i>,<j>          w_i(x) w_j(y)
//!   rect:<a0>,<a1>,<b0>,<b1>   indicator of a dyadic rectangle: x-codes with
//!                          top a1 bits equal to a0, y-codes with top b1 bits
//!                          equal to b0
//!   step:<L>:<seed>        iid uniform [-1,1] values on the level-L cells,
//!                          drawn in row-major cell order from a seeded
//!                          stream; the same function at every N >= L
//!   singular:<beta>        ((u+1/2)/2^N)^-beta * ((v+1/2)/2^N)^-beta,
//!                          a positive integrable spike at the origin
//!
//! `parse` and `format` are inverse to each other, and `generate` is fully
//! deterministic given the spec and the resolution.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

use crate::error::{Error, Result};
use crate::grid::Grid2;
use crate::point::walsh_sign;

#[derive(Clone, Debug, PartialEq)]
pub enum FunctionSpec {
    Const { c: f64 },
    Walsh { i: u32, j: u32 },
    Rect { a0: u32, a1: u32, b0: u32, b1: u32 },
    Step { level: u32, seed: u64 },
    Singular { beta: f64 },
}

fn parse_number<T: std::str::FromStr>(text: &str, pos: usize, what: &str) -> Result<T> {
    text.parse().map_err(|_| Error::SpecParse {
        position: pos,
        message: format!("expected {what}, got {text:?}"),
    })
}

impl FunctionSpec {
    pub fn parse(text: &str) -> Result<Self> {
        let (family, rest) = match text.find(':') {
            Some(i) => (&text[..i], &text[i + 1..]),
            None => (text, ""),
        };
        let body_pos = family.len() + 1;
        let fields = |expected: usize| -> Result<Vec<(&str, usize)>> {
            let mut out = Vec::new();
            let mut pos = body_pos;
            for piece in rest.split(',') {
                out.push((piece, pos));
                pos += piece.len() + 1;
            }
            if rest.is_empty() || out.len() != expected {
                return Err(Error::SpecParse {
                    position: body_pos,
                    message: format!(
                        "{family} takes {expected} comma-separated parameter(s)"
                    ),
                });
            }
            Ok(out)
        };

        match family {
            "const" => {
                let f = fields(1)?;
                let c: f64 = parse_number(f[0].0, f[0].1, "a number")?;
                if !c.is_finite() {
                    return Err(Error::SpecParse {
                        position: f[0].1,
                        message: "constant must be finite".into(),
                    });
                }
                Ok(FunctionSpec::Const { c })
            }
            "walsh" => {
                let f = fields(2)?;
                Ok(FunctionSpec::Walsh {
                    i: parse_number(f[0].0, f[0].1, "a frequency")?,
                    j: parse_number(f[1].0, f[1].1, "a frequency")?,
                })
            }
            "rect" => {
                let f = fields(4)?;
                Ok(FunctionSpec::Rect {
                    a0: parse_number(f[0].0, f[0].1, "a cell index")?,
                    a1: parse_number(f[1].0, f[1].1, "a level")?,
                    b0: parse_number(f[2].0, f[2].1, "a cell index")?,
                    b1: parse_number(f[3].0, f[3].1, "a level")?,
                })
            }
            "step" => {
                // step:<L>:<seed> uses ':' as its own separator.
                let (lvl_text, seed_text) = rest.split_once(':').ok_or(Error::SpecParse {
                    position: body_pos,
                    message: "step takes level and seed as step:<L>:<seed>".into(),
                })?;
                let level = parse_number(lvl_text, body_pos, "a level")?;
                let seed = parse_number(seed_text, body_pos + lvl_text.len() + 1, "a seed")?;
                Ok(FunctionSpec::Step { level, seed })
            }
            "singular" => {
                let f = fields(1)?;
                let beta: f64 = parse_number(f[0].0, f[0].1, "an exponent")?;
                if !(beta > 0.0 && beta < 0.5) {
                    return Err(Error::SpecParse {
                        position: f[0].1,
                        message: format!(
                            "singular exponent must lie in (0, 1/2) for square integrability, got {beta}"
                        ),
                    });
                }
                Ok(FunctionSpec::Singular { beta })
            }
            other => Err(Error::SpecParse {
                position: 0,
                message: format!("unknown family {other:?}"),
            }),
        }
    }

    pub fn format(&self) -> String {
        match self {
            FunctionSpec::Const { c } => format!("const:{c}"),
            FunctionSpec::Walsh { i, j } => format!("walsh:{i},{j}"),
            FunctionSpec::Rect { a0, a1, b0, b1 } => format!("rect:{a0},{a1},{b0},{b1}"),
            FunctionSpec::Step { level, seed } => format!("step:{level}:{seed}"),
            FunctionSpec::Singular { beta } => format!("singular:{beta}"),
        }
    }

    /// Realizes the spec as a level-N grid.
    pub fn generate(&self, resolution: u8) -> Result<Grid2> {
        let res = resolution as u32;
        match *self {
            FunctionSpec::Const { c } => Grid2::constant(resolution, c),
            FunctionSpec::Walsh { i, j } => {
                let side = 1u64 << res;
                for f in [i, j] {
                    if f as u64 >= side {
                        return Err(Error::FrequencyOutOfRange {
                            frequency: f as u64,
                            resolution,
                        });
                    }
                }
                Grid2::from_fn(resolution, |x, y| {
                    (walsh_sign(i, x, resolution) * walsh_sign(j, y, resolution)) as f64
                })
            }
            FunctionSpec::Rect { a0, a1, b0, b1 } => {
                for (cell, level) in [(a0, a1), (b0, b1)] {
                    if level > res {
                        return Err(Error::IndexOutOfRange {
                            what: "rectangle level",
                            value: level as u64,
                            max: res as u64,
                        });
                    }
                    if (cell as u64) >= (1u64 << level) {
                        return Err(Error::IndexOutOfRange {
                            what: "rectangle cell",
                            value: cell as u64,
                            max: (1u64 << level) - 1,
                        });
                    }
                }
                Grid2::from_fn(resolution, |x, y| {
                    let in_x = x >> (res - a1) == a0;
                    let in_y = y >> (res - b1) == b0;
                    if in_x && in_y {
                        1.0
                    } else {
                        0.0
                    }
                })
            }
            FunctionSpec::Step { level, seed } => {
                if level > res {
                    return Err(Error::IndexOutOfRange {
                        what: "step level",
                        value: level as u64,
                        max: res as u64,
                    });
                }
                // Cell values drawn in row-major order over the level-L
                // cells, independent of N, so refining the grid does not
                // change the function.
                let cells = 1usize << level;
                let mut rng = ChaCha12Rng::seed_from_u64(seed);
                let mut cell_values = vec![0.0f64; cells * cells];
                for v in cell_values.iter_mut() {
                    *v = rng.gen_range(-1.0..=1.0);
                }
                let shift = res - level;
                Grid2::from_fn(resolution, |x, y| {
                    cell_values[(((x >> shift) as usize) << level) | (y >> shift) as usize]
                })
            }
            FunctionSpec::Singular { beta } => {
                let scale = (1u64 << res) as f64;
                Grid2::from_fn(resolution, |x, y| {
                    let u = (x as f64 + 0.5) / scale;
                    let v = (y as f64 + 0.5) / scale;
                    u.powf(-beta) * v.powf(-beta)
                })
            }
        }
    }
}

impl std::fmt::Display for FunctionSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.format())
    }
}

impl std::str::FromStr for FunctionSpec {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        FunctionSpec::parse(s)
    }
}

/// The fixed measurement corpus: dyadic rectangles, Walsh products, seeded
/// random steps, and two integrable singular spikes. Every member is defined
/// at any resolution >= 5.
pub fn standard_corpus(resolution: u8) -> Result<Vec<(FunctionSpec, Grid2)>> {
    let specs = [
        "rect:0,1,0,1",
        "rect:1,2,0,1",
        "rect:3,2,3,2",
        "walsh:1,1",
        "walsh:2,5",
        "walsh:7,3",
        "step:3:101",
        "step:4:202",
        "step:5:303",
        "singular:0.25",
        "singular:0.4",
    ];
    specs
        .iter()
        .map(|text| {
            let spec = FunctionSpec::parse(text)?;
            let grid = spec.generate(resolution)?;
            Ok((spec, grid))
        })
        .collect()
}
