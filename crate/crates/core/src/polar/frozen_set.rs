//! Plain-text information-set files.
//!
//! ```text
//! n_code=256
//! payload_len=128
//! crc_len=8
//! design_snr_db=4
//! scheme=bipcm
//! crc_poly=0x7
//! 17
//! 23
//! ...
//! ```
//!
//! The header keys appear in exactly this order; information indices
//! follow one per line, ascending.

use std::fs;
use std::path::Path;
use std::str::FromStr;

use super::{Crc, PolarCodeSpec};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct FrozenSetFile {
    pub spec: PolarCodeSpec,
    pub design_snr_db: f64,
    /// Free-form scheme tag, e.g. `bipcm` or `mlpc.1`.
    pub scheme: String,
}

const KEYS: [&str; 6] = [
    "n_code",
    "payload_len",
    "crc_len",
    "design_snr_db",
    "scheme",
    "crc_poly",
];

impl FrozenSetFile {
    pub fn to_text(&self) -> String {
        let spec = &self.spec;
        let mut out = format!(
            "n_code={}\npayload_len={}\ncrc_len={}\ndesign_snr_db={}\nscheme={}\ncrc_poly={:#x}\n",
            spec.n_code(),
            spec.payload_len(),
            spec.crc_len(),
            self.design_snr_db,
            self.scheme,
            spec.crc().poly()
        );
        for i in spec.info_set() {
            out.push_str(&i.to_string());
            out.push('\n');
        }
        out
    }

    pub fn parse(text: &str, source_name: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate();
        let mut values = Vec::with_capacity(KEYS.len());
        for key in KEYS {
            let (no, line) = lines
                .next()
                .ok_or_else(|| Error::format(source_name, 0, format!("missing `{key}=` line")))?;
            let value = line
                .strip_prefix(key)
                .and_then(|rest| rest.strip_prefix('='))
                .ok_or_else(|| Error::format(source_name, no + 1, format!("expected `{key}=`")))?;
            values.push((no + 1, value.trim()));
        }

        fn num<T: FromStr>(src: &str, (line, v): (usize, &str)) -> Result<T> {
            v.parse()
                .map_err(|_| Error::format(src, line, format!("cannot parse `{v}`")))
        }

        let n_code: usize = num(source_name, values[0])?;
        let payload_len: usize = num(source_name, values[1])?;
        let crc_len: usize = num(source_name, values[2])?;
        let design_snr_db: f64 = num(source_name, values[3])?;
        let scheme = values[4].1.to_owned();
        let (poly_line, poly_text) = values[5];
        let poly = u32::from_str_radix(poly_text.trim_start_matches("0x"), 16)
            .map_err(|_| Error::format(source_name, poly_line, "bad crc_poly"))?;
        let crc = Crc::new(crc_len, poly)
            .map_err(|e| Error::format(source_name, poly_line, e.to_string()))?;

        let mut info_set = Vec::new();
        for (no, line) in lines {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let idx: usize = num(source_name, (no + 1, line))?;
            if info_set.last().is_some_and(|&prev| prev >= idx) {
                return Err(Error::format(source_name, no + 1, "indices must ascend"));
            }
            info_set.push(idx);
        }
        if info_set.len() != payload_len + crc_len {
            return Err(Error::format(
                source_name,
                0,
                format!(
                    "{} indices listed, header implies {}",
                    info_set.len(),
                    payload_len + crc_len
                ),
            ));
        }
        let spec = PolarCodeSpec::new(n_code, info_set, crc)
            .map_err(|e| Error::format(source_name, 0, e.to_string()))?;
        Ok(FrozenSetFile {
            spec,
            design_snr_db,
            scheme,
        })
    }
}

pub fn write_frozen_set(path: impl AsRef<Path>, file: &FrozenSetFile) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, file.to_text()).map_err(|e| Error::io(path, e))
}

pub fn read_frozen_set(path: impl AsRef<Path>) -> Result<FrozenSetFile> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    FrozenSetFile::parse(&text, &path.display().to_string())
}
