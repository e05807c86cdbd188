//! Netpbm grayscale (PGM) reading and writing, plain (P2) and raw (P5).

use std::io::Write;

use robmean::GrayImage;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum PgmError {
    #[error("invalid PGM: {0}")]
    Format(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PgmFormat {
    /// Plain text, `P2`.
    Plain,
    /// Binary, `P5`.
    Raw,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PgmImage {
    pub format: PgmFormat,
    pub width: usize,
    pub height: usize,
    pub maxval: u16,
    /// Row-major raw sample values, each `<= maxval`.
    pub samples: Vec<u16>,
}

struct Cursor<'a> {
    data: &'a [u8],
    pos: usize,
}

impl Cursor<'_> {
    fn skip_space_and_comments(&mut self) {
        while self.pos < self.data.len() {
            match self.data[self.pos] {
                b'#' => {
                    while self.pos < self.data.len() && self.data[self.pos] != b'\n' {
                        self.pos += 1;
                    }
                }
                c if c.is_ascii_whitespace() => self.pos += 1,
                _ => break,
            }
        }
    }

    fn token(&mut self) -> Option<&[u8]> {
        self.skip_space_and_comments();
        let start = self.pos;
        while self.pos < self.data.len() && !self.data[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
        (self.pos > start).then(|| &self.data[start..self.pos])
    }

    fn number(&mut self, what: &str) -> Result<usize, PgmError> {
        let tok = self
            .token()
            .ok_or_else(|| PgmError::Format(format!("missing {what}")))?;
        std::str::from_utf8(tok)
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| {
                PgmError::Format(format!("bad {what}: {:?}", String::from_utf8_lossy(tok)))
            })
    }
}

impl PgmImage {
    pub fn parse(data: &[u8]) -> Result<Self, PgmError> {
        let mut cur = Cursor { data, pos: 0 };
        let format = match cur.token() {
            Some(b"P2") => PgmFormat::Plain,
            Some(b"P5") => PgmFormat::Raw,
            _ => return Err(PgmError::Format("expected magic number P2 or P5".into())),
        };
        let width = cur.number("width")?;
        let height = cur.number("height")?;
        let maxval = cur.number("maxval")?;
        if width == 0 || height == 0 {
            return Err(PgmError::Format(format!("empty image {width}x{height}")));
        }
        if maxval == 0 || maxval > 65535 {
            return Err(PgmError::Format(format!(
                "maxval {maxval} outside 1..=65535"
            )));
        }
        let maxval = maxval as u16;
        let count = width
            .checked_mul(height)
            .ok_or_else(|| PgmError::Format("image too large".into()))?;

        let samples = match format {
            PgmFormat::Plain => {
                let mut samples = Vec::with_capacity(count);
                for _ in 0..count {
                    let v = cur.number("sample")?;
                    samples.push(check_sample(v, maxval)?);
                }
                samples
            }
            PgmFormat::Raw => {
                // Exactly one whitespace byte separates the header from the raster.
                if cur.pos >= data.len() || !data[cur.pos].is_ascii_whitespace() {
                    return Err(PgmError::Format("missing raster".into()));
                }
                let raster = &data[cur.pos + 1..];
                let bytes = if maxval < 256 { 1 } else { 2 };
                if raster.len() < count * bytes {
                    return Err(PgmError::Format(format!(
                        "raster has {} bytes, expected {}",
                        raster.len(),
                        count * bytes
                    )));
                }
                let raw: Vec<usize> = if bytes == 1 {
                    raster[..count].iter().map(|&b| b as usize).collect()
                } else {
                    raster[..2 * count]
                        .chunks_exact(2)
                        .map(|p| u16::from_be_bytes([p[0], p[1]]) as usize)
                        .collect()
                };
                raw.into_iter()
                    .map(|v| check_sample(v, maxval))
                    .collect::<Result<_, _>>()?
            }
        };
        Ok(Self {
            format,
            width,
            height,
            maxval,
            samples,
        })
    }

    pub fn read(path: &str) -> Result<Self, PgmError> {
        Self::parse(&crate::read_input(path)?)
    }

    pub fn write_to<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        match self.format {
            PgmFormat::Plain => {
                writeln!(out, "P2\n{} {}\n{}", self.width, self.height, self.maxval)?;
                for row in self.samples.chunks(self.width) {
                    let line: Vec<String> = row.iter().map(u16::to_string).collect();
                    writeln!(out, "{}", line.join(" "))?;
                }
            }
            PgmFormat::Raw => {
                write!(out, "P5\n{} {}\n{}\n", self.width, self.height, self.maxval)?;
                if self.maxval < 256 {
                    let bytes: Vec<u8> = self.samples.iter().map(|&v| v as u8).collect();
                    out.write_all(&bytes)?;
                } else {
                    let bytes: Vec<u8> =
                        self.samples.iter().flat_map(|v| v.to_be_bytes()).collect();
                    out.write_all(&bytes)?;
                }
            }
        }
        out.flush()
    }

    pub fn to_gray(&self) -> GrayImage {
        let scale = f64::from(self.maxval);
        let pixels = self.samples.iter().map(|&v| f64::from(v) / scale).collect();
        GrayImage::new(self.width, self.height, pixels).expect("samples are within maxval")
    }

    /// Quantizes `img` to this image's format and bit depth, rounding half away
    /// from zero.
    pub fn with_pixels(&self, img: &GrayImage) -> Self {
        let scale = f64::from(self.maxval);
        let samples = img
            .pixels()
            .iter()
            .map(|&p| (p * scale).round().clamp(0.0, scale) as u16)
            .collect();
        Self {
            width: img.width(),
            height: img.height(),
            samples,
            ..*self
        }
    }
}

fn check_sample(v: usize, maxval: u16) -> Result<u16, PgmError> {
    if v > maxval as usize {
        Err(PgmError::Format(format!(
            "sample {v} exceeds maxval {maxval}"
        )))
    } else {
        Ok(v as u16)
    }
}
