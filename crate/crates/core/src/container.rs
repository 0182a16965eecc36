//! Single-file container: a little-endian header followed by encoded
//! stripes, each stored chunk by chunk.
//!
//! ```text
//! magic "STAIRC1\0" | version u16 | w u8 | n u16 | r u16 | m u16 | m' u16
//! | e[0..m'] u16 | symbol_size u32 | poly u32 | data_length u64
//! ```

use std::collections::BTreeSet;
use std::fs;
use std::path::Path;
use std::str::FromStr;
use std::sync::Arc;

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf::Field;
use crate::stair::{
    pattern_within_coverage, within_effective_coverage, Cell, FailurePattern, Method, StairCode, StairConfig, Stripe,
};

pub const MAGIC: [u8; 8] = *b"STAIRC1\0";
pub const VERSION: u16 = 1;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Header {
    pub w: u8,
    pub n: u16,
    pub r: u16,
    pub m: u16,
    pub e: Vec<u16>,
    pub symbol_size: u32,
    /// Reduction polynomial without its leading term.
    pub poly: u32,
    pub data_length: u64,
}

impl Header {
    pub fn new(code: &StairCode, symbol_size: usize, data_length: u64) -> Result<Self> {
        let cfg = code.config();
        let narrow = |v: usize, what: &str| {
            u16::try_from(v).map_err(|_| Error::Container(format!("{what}={v} does not fit the header")))
        };
        Ok(Header {
            w: cfg.w() as u8,
            n: narrow(cfg.n(), "n")?,
            r: narrow(cfg.r(), "r")?,
            m: narrow(cfg.m(), "m")?,
            e: cfg.e().iter().map(|&x| narrow(x, "e")).collect::<Result<_>>()?,
            symbol_size: u32::try_from(symbol_size)
                .map_err(|_| Error::Container(format!("symbol size {symbol_size} does not fit the header")))?,
            poly: code.field().poly_low(),
            data_length,
        })
    }

    pub fn len(&self) -> usize {
        35 + 2 * self.e.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(self.len());
        out.extend_from_slice(&MAGIC);
        out.extend_from_slice(&VERSION.to_le_bytes());
        out.push(self.w);
        for v in [self.n, self.r, self.m, self.e.len() as u16] {
            out.extend_from_slice(&v.to_le_bytes());
        }
        for v in &self.e {
            out.extend_from_slice(&v.to_le_bytes());
        }
        out.extend_from_slice(&self.symbol_size.to_le_bytes());
        out.extend_from_slice(&self.poly.to_le_bytes());
        out.extend_from_slice(&self.data_length.to_le_bytes());
        out
    }

    pub fn parse(bytes: &[u8]) -> Result<Self> {
        let mut rd = Reader { bytes, pos: 0 };
        if rd.take(8)? != MAGIC {
            return Err(Error::Container("bad magic".into()));
        }
        let version = rd.u16()?;
        if version != VERSION {
            return Err(Error::Container(format!("unsupported version {version}")));
        }
        let w = rd.take(1)?[0];
        let (n, r, m, mp) = (rd.u16()?, rd.u16()?, rd.u16()?, rd.u16()?);
        let e = (0..mp).map(|_| rd.u16()).collect::<Result<Vec<_>>>()?;
        if e.windows(2).any(|p| p[0] > p[1]) {
            return Err(Error::Container("e is not sorted".into()));
        }
        let symbol_size = rd.u32()?;
        let poly = rd.u32()?;
        let data_length = u64::from_le_bytes(rd.take(8)?.try_into().unwrap());
        Ok(Header { w, n, r, m, e, symbol_size, poly, data_length })
    }

    pub fn config(&self) -> Result<StairConfig> {
        let e: Vec<usize> = self.e.iter().map(|&x| x as usize).collect();
        StairConfig::new(self.n as usize, self.r as usize, self.m as usize, &e, self.w as u32)
    }

    pub fn code(&self) -> Result<StairCode> {
        let field = Field::new(self.w as u32, self.poly as u64)?;
        StairCode::with_field(self.config()?, Arc::new(field))
    }

    pub fn stripe_bytes(&self) -> usize {
        self.n as usize * self.r as usize * self.symbol_size as usize
    }

    /// User bytes held by one stripe.
    pub fn data_per_stripe(&self) -> usize {
        let s: usize = self.e.iter().map(|&x| x as usize).sum();
        ((self.n - self.m) as usize * self.r as usize - s) * self.symbol_size as usize
    }

    pub fn stripes(&self) -> usize {
        let per = self.data_per_stripe() as u64;
        if per == 0 {
            return 0;
        }
        self.data_length.div_ceil(per) as usize
    }
}

struct Reader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn take(&mut self, k: usize) -> Result<&'a [u8]> {
        let s = self.bytes.get(self.pos..self.pos + k).ok_or_else(|| Error::Container("truncated header".into()))?;
        self.pos += k;
        Ok(s)
    }

    fn u16(&mut self) -> Result<u16> {
        Ok(u16::from_le_bytes(self.take(2)?.try_into().unwrap()))
    }

    fn u32(&mut self) -> Result<u32> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().unwrap()))
    }
}

/// A parsed container held in memory.
#[derive(Clone, Debug)]
pub struct Container {
    pub header: Header,
    pub code: StairCode,
    /// The stripes, back to back.
    pub body: Vec<u8>,
}

impl Container {
    /// Zero-pads `data` to whole stripes and encodes every stripe.
    pub fn encode(code: StairCode, symbol_size: usize, data: &[u8], method: Method) -> Result<Self> {
        let header = Header::new(&code, symbol_size, data.len() as u64)?;
        let cfg = code.config().clone();
        let per = header.data_per_stripe();
        let stripes = header.stripes();
        let sb = header.stripe_bytes();
        let mut body = vec![0u8; stripes * sb];
        body.par_chunks_mut(sb).enumerate().try_for_each(|(i, out)| -> Result<()> {
            let mut s = Stripe::new(&cfg, symbol_size)?;
            let end = ((i + 1) * per).min(data.len());
            s.fill_data(&cfg, &data[i * per..end]);
            code.encode(&mut s, method)?;
            out.copy_from_slice(s.as_bytes());
            Ok(())
        })?;
        Ok(Container { header, code, body })
    }

    pub fn parse(bytes: &[u8]) -> Result<Self> {
        let header = Header::parse(bytes)?;
        let code = header.code()?;
        let body = bytes[header.len()..].to_vec();
        let want = header.stripes() * header.stripe_bytes();
        if body.len() != want {
            return Err(Error::Container(format!("body holds {} bytes, header implies {want}", body.len())));
        }
        Ok(Container { header, code, body })
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = self.header.to_bytes();
        out.extend_from_slice(&self.body);
        out
    }

    pub fn stripes(&self) -> usize {
        self.header.stripes()
    }

    pub fn stripe(&self, i: usize) -> Result<Stripe> {
        let sb = self.header.stripe_bytes();
        Stripe::from_bytes(self.code.config(), self.header.symbol_size as usize, self.body[i * sb..(i + 1) * sb].to_vec())
    }

    /// The user data, read from the data cells without any repair.
    pub fn extract(&self) -> Result<Vec<u8>> {
        let cfg = self.code.config();
        let mut out = Vec::with_capacity(self.stripes() * self.header.data_per_stripe());
        for i in 0..self.stripes() {
            out.extend(self.stripe(i)?.data_bytes(cfg));
        }
        out.truncate(self.header.data_length as usize);
        Ok(out)
    }

    /// Zeroes the cells chosen by `spec` and records them.
    pub fn inject(&mut self, spec: &InjectSpec, seed: u64) -> Result<Manifest> {
        let cfg = self.code.config().clone();
        let sb = self.header.stripe_bytes();
        let targets: Vec<usize> = match &spec.stripes {
            StripeSel::All => (0..self.stripes()).collect(),
            StripeSel::List(v) => v.clone(),
        };
        let mut stripes = Vec::new();
        for i in targets {
            if i >= self.stripes() {
                return Err(Error::PatternSpec(format!("stripe {i} out of range ({} stripes)", self.stripes())));
            }
            let pattern = spec.pattern(&cfg, seed, i as u64)?;
            if pattern.is_empty() {
                continue;
            }
            let mut s = self.stripe(i)?;
            let cells = pattern.lost_cells(&cfg);
            s.erase(&cells);
            self.body[i * sb..(i + 1) * sb].copy_from_slice(s.as_bytes());
            stripes.push(StripeDamage {
                stripe: i,
                within_coverage: pattern_within_coverage(&cfg, &pattern),
                within_effective_coverage: within_effective_coverage(&cfg, &pattern),
                cells,
            });
        }
        Ok(Manifest { within_coverage: stripes.iter().all(|s| s.within_coverage), stripes })
    }

    /// Restores every damaged stripe listed in `manifest`. Stops at the
    /// first stripe that cannot be recovered.
    pub fn repair(&mut self, manifest: &Manifest) -> Result<usize> {
        let cfg = self.code.config().clone();
        let sb = self.header.stripe_bytes();
        for d in &manifest.stripes {
            if d.stripe >= self.stripes() {
                return Err(Error::Container(format!("manifest names stripe {} of {}", d.stripe, self.stripes())));
            }
            let mut s = self.stripe(d.stripe)?;
            let pattern = FailurePattern::from_cells(&cfg, &d.cells);
            self.code.decode(&mut s, &pattern).map_err(|e| match e {
                Error::Unrecoverable(why) => Error::Unrecoverable(format!("stripe {}: {why}", d.stripe)),
                other => other,
            })?;
            self.body[d.stripe * sb..(d.stripe + 1) * sb].copy_from_slice(s.as_bytes());
        }
        Ok(manifest.stripes.len())
    }

    /// Writes `header.bin` plus one `devNNN.bin` per chunk column.
    pub fn write_devices(&self, dir: &Path) -> Result<()> {
        fs::create_dir_all(dir)?;
        fs::write(dir.join("header.bin"), self.header.to_bytes())?;
        let chunk = self.header.r as usize * self.header.symbol_size as usize;
        let n = self.header.n as usize;
        for j in 0..n {
            let mut dev = Vec::with_capacity(self.stripes() * chunk);
            for stripe in self.body.chunks(n * chunk) {
                dev.extend_from_slice(&stripe[j * chunk..(j + 1) * chunk]);
            }
            fs::write(dir.join(device_name(j)), dev)?;
        }
        Ok(())
    }

    /// Reassembles a container from a device directory. A missing device
    /// file reads as zeros and is reported as a failed chunk.
    pub fn read_devices(dir: &Path) -> Result<(Self, Vec<usize>)> {
        let header = Header::parse(&fs::read(dir.join("header.bin"))?)?;
        let code = header.code()?;
        let chunk = header.r as usize * header.symbol_size as usize;
        let n = header.n as usize;
        let stripes = header.stripes();
        let mut body = vec![0u8; stripes * n * chunk];
        let mut missing = Vec::new();
        for j in 0..n {
            let dev = match fs::read(dir.join(device_name(j))) {
                Ok(d) => d,
                Err(e) if e.kind() == std::io::ErrorKind::NotFound => {
                    missing.push(j);
                    continue;
                }
                Err(e) => return Err(e.into()),
            };
            if dev.len() != stripes * chunk {
                return Err(Error::Container(format!("{} holds {} bytes, expected {}", device_name(j), dev.len(), stripes * chunk)));
            }
            for (i, c) in dev.chunks(chunk).enumerate() {
                body[(i * n + j) * chunk..(i * n + j + 1) * chunk].copy_from_slice(c);
            }
        }
        Ok((Container { header, code, body }, missing))
    }
}

fn device_name(j: usize) -> String {
    format!("dev{j:03}.bin")
}

/// Which stripes an injection touches.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub enum StripeSel {
    #[default]
    All,
    List(Vec<usize>),
}

/// Parsed form of `chunks=3,7;sectors=4:2,5:1;cells=5/2,5/3;stripes=all`.
///
/// `sectors=c:k` loses `k` seeded random rows of chunk `c`; `cells=row/col`
/// names single cells. Every clause is optional.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct InjectSpec {
    pub chunks: Vec<usize>,
    pub sectors: Vec<(usize, usize)>,
    pub cells: Vec<Cell>,
    pub stripes: StripeSel,
}

impl InjectSpec {
    /// The pattern for stripe `stripe`; sector rows depend on `seed` and
    /// the stripe index only.
    pub fn pattern(&self, cfg: &StairConfig, seed: u64, stripe: u64) -> Result<FailurePattern> {
        let mut p = FailurePattern::new();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stripe);
        for &c in &self.chunks {
            p.fail_chunk(c);
        }
        for &(c, k) in &self.sectors {
            if k > cfg.r() {
                return Err(Error::PatternSpec(format!("chunk {c} cannot lose {k} of {} sectors", cfg.r())));
            }
            if c < cfg.n() {
                for row in sample(&mut rng, cfg.r(), k) {
                    p.fail_sector(row, c);
                }
            } else {
                p.fail_sector(0, c);
            }
        }
        for c in &self.cells {
            p.fail_sector(c.row, c.col);
        }
        p.validate(cfg).map_err(|e| Error::PatternSpec(e.to_string()))?;
        Ok(FailurePattern::from_cells(cfg, &p.lost_cells(cfg)))
    }
}

impl FromStr for InjectSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut spec = InjectSpec::default();
        let num = |t: &str| t.trim().parse::<usize>().map_err(|_| Error::PatternSpec(format!("bad number {t:?}")));
        let pair = |t: &str, sep: char| -> Result<(usize, usize)> {
            let (a, b) = t.split_once(sep).ok_or_else(|| Error::PatternSpec(format!("expected a{sep}b, got {t:?}")))?;
            Ok((num(a)?, num(b)?))
        };
        for clause in s.split(';').map(str::trim).filter(|c| !c.is_empty()) {
            let (key, val) =
                clause.split_once('=').ok_or_else(|| Error::PatternSpec(format!("clause {clause:?} lacks '='")))?;
            let items = val.split(',').map(str::trim).filter(|v| !v.is_empty());
            match key.trim() {
                "chunks" => spec.chunks = items.map(num).collect::<Result<_>>()?,
                "sectors" => spec.sectors = items.map(|t| pair(t, ':')).collect::<Result<_>>()?,
                "cells" => {
                    spec.cells = items.map(|t| pair(t, '/').map(|(r, c)| Cell::new(r, c))).collect::<Result<_>>()?
                }
                "stripes" if val.trim() == "all" => spec.stripes = StripeSel::All,
                "stripes" => {
                    let v: BTreeSet<usize> = items.map(num).collect::<Result<_>>()?;
                    spec.stripes = StripeSel::List(v.into_iter().collect());
                }
                other => return Err(Error::PatternSpec(format!("unknown clause {other:?}"))),
            }
        }
        Ok(spec)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StripeDamage {
    pub stripe: usize,
    pub cells: Vec<Cell>,
    pub within_coverage: bool,
    pub within_effective_coverage: bool,
}

/// JSON record of an injection, consumed by repair.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Manifest {
    /// True when every damaged stripe is within the code's coverage.
    pub within_coverage: bool,
    pub stripes: Vec<StripeDamage>,
}
