//! CSV snapshots with a one-line header and a checksum trailer.
//!
//! ```text
//! # vk-micro v1 t=<t> n=<N> L=<L>
//! id,x,y,theta,omega
//! 0,<x>,<y>,<theta>,<omega>
//! ...
//! # checksum=<16 hex digits>
//! ```
//!
//! Grid files use the header `# vk-macro v1 t=<t> nx=<nx> ny=<ny> L=<L>`
//! and rows `i,j,rho,omega_bar,Omega_x,Omega_y` with `i` running fastest.
//! Floats carry 17 significant digits, so every value reads back bit for
//! bit. The checksum is the first 8 bytes of the SHA-256 of everything
//! before the trailer line.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::macrosim::MacroState;
use crate::microsim::ParticleEnsemble;
use crate::sink::{SnapshotRef, SnapshotSink};

const MICRO_MAGIC: &str = "# vk-micro v1";
const MACRO_MAGIC: &str = "# vk-macro v1";
const MICRO_COLUMNS: &str = "id,x,y,theta,omega";
const MACRO_COLUMNS: &str = "i,j,rho,omega_bar,Omega_x,Omega_y";
const TRAILER: &str = "# checksum=";

/// Particle snapshot as stored on disk.
#[derive(Debug, Clone, PartialEq)]
pub struct ParticleSnapshot {
    pub t: f64,
    pub ensemble: ParticleEnsemble<f64>,
}

/// Grid snapshot as stored on disk: primitive rather than conserved fields.
#[derive(Debug, Clone, PartialEq)]
pub struct GridSnapshot {
    pub t: f64,
    pub nx: usize,
    pub ny: usize,
    pub length: f64,
    pub rho: Vec<f64>,
    pub omega_bar: Vec<f64>,
    pub dir: Vec<[f64; 2]>,
}

impl GridSnapshot {
    pub fn from_state(t: f64, s: &MacroState<f64>) -> Self {
        Self {
            t,
            nx: s.nx,
            ny: s.ny,
            length: s.length(),
            rho: s.rho.clone(),
            omega_bar: s.omega_bars(),
            dir: s.directions(),
        }
    }

    pub fn to_state(&self) -> MacroState<f64> {
        MacroState {
            nx: self.nx,
            ny: self.ny,
            dx: self.length / self.nx as f64,
            dy: self.length / self.ny as f64,
            rho: self.rho.clone(),
            m_omega: self.rho.iter().zip(&self.omega_bar).map(|(r, w)| r * w).collect(),
            m_dir: self.rho.iter().zip(&self.dir).map(|(r, d)| [r * d[0], r * d[1]]).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Snapshot {
    Micro(ParticleSnapshot),
    Macro(GridSnapshot),
}

impl Snapshot {
    pub fn t(&self) -> f64 {
        match self {
            Snapshot::Micro(s) => s.t,
            Snapshot::Macro(s) => s.t,
        }
    }
}

pub fn checksum(payload: &[u8]) -> u64 {
    let digest = Sha256::digest(payload);
    u64::from_be_bytes(digest[..8].try_into().unwrap())
}

fn seal(mut body: String) -> String {
    let sum = checksum(body.as_bytes());
    writeln!(body, "{TRAILER}{sum:016x}").unwrap();
    body
}

pub fn format_micro(t: f64, e: &ParticleEnsemble<f64>) -> String {
    let mut s = String::with_capacity(96 * (e.len() + 2));
    writeln!(s, "{MICRO_MAGIC} t={t:.16e} n={} L={:.16e}", e.len(), e.length).unwrap();
    writeln!(s, "{MICRO_COLUMNS}").unwrap();
    for i in 0..e.len() {
        writeln!(
            s,
            "{i},{:.16e},{:.16e},{:.16e},{:.16e}",
            e.pos[i][0], e.pos[i][1], e.theta[i], e.omega[i]
        )
        .unwrap();
    }
    seal(s)
}

pub fn format_macro(g: &GridSnapshot) -> String {
    let mut s = String::with_capacity(110 * (g.rho.len() + 2));
    writeln!(s, "{MACRO_MAGIC} t={:.16e} nx={} ny={} L={:.16e}", g.t, g.nx, g.ny, g.length).unwrap();
    writeln!(s, "{MACRO_COLUMNS}").unwrap();
    for j in 0..g.ny {
        for i in 0..g.nx {
            let c = j * g.nx + i;
            writeln!(
                s,
                "{i},{j},{:.16e},{:.16e},{:.16e},{:.16e}",
                g.rho[c], g.omega_bar[c], g.dir[c][0], g.dir[c][1]
            )
            .unwrap();
        }
    }
    seal(s)
}

/// Splits off and verifies the trailer; returns the sealed body.
fn verify(text: &str) -> Result<&str> {
    let body_end = text
        .trim_end_matches('\n')
        .rfind('\n')
        .map(|i| i + 1)
        .ok_or_else(|| Error::Checksum("no checksum trailer".into()))?;
    let (body, trailer) = text.split_at(body_end);
    let hex = trailer
        .trim_end()
        .strip_prefix(TRAILER)
        .ok_or_else(|| Error::Checksum("no checksum trailer (truncated file?)".into()))?;
    let stored = u64::from_str_radix(hex, 16).map_err(|_| Error::Checksum(format!("unreadable checksum `{hex}`")))?;
    let actual = checksum(body.as_bytes());
    if stored != actual {
        return Err(Error::Checksum(format!("stored {stored:016x}, computed {actual:016x}")));
    }
    Ok(body)
}

fn header_fields<'a>(line: &'a str, magic: &str) -> Result<Vec<(&'a str, &'a str)>> {
    let rest = line
        .strip_prefix(magic)
        .ok_or_else(|| Error::Snapshot(format!("bad header `{line}`")))?;
    rest.split_whitespace()
        .map(|kv| kv.split_once('=').ok_or_else(|| Error::Snapshot(format!("bad header field `{kv}`"))))
        .collect()
}

fn field<V: std::str::FromStr>(fields: &[(&str, &str)], key: &str) -> Result<V> {
    let raw = fields
        .iter()
        .find(|(k, _)| *k == key)
        .map(|(_, v)| *v)
        .ok_or_else(|| Error::Snapshot(format!("header lacks `{key}`")))?;
    raw.parse().map_err(|_| Error::Snapshot(format!("header field `{key}={raw}` unreadable")))
}

fn parse_row<const K: usize>(line: &str, lineno: usize) -> Result<[f64; K]> {
    let mut out = [0.0; K];
    let mut parts = line.split(',');
    for v in out.iter_mut() {
        let p = parts.next().ok_or_else(|| Error::Snapshot(format!("line {lineno}: too few columns")))?;
        *v = p
            .parse()
            .map_err(|_| Error::Snapshot(format!("line {lineno}: unreadable value `{p}`")))?;
    }
    if parts.next().is_some() {
        return Err(Error::Snapshot(format!("line {lineno}: too many columns")));
    }
    Ok(out)
}

/// Parses a snapshot; the checksum is verified before anything else.
pub fn parse_snapshot(text: &str) -> Result<Snapshot> {
    let body = verify(text)?;
    let mut lines = body.lines();
    let header = lines.next().ok_or_else(|| Error::Snapshot("empty file".into()))?;
    let columns = lines.next().unwrap_or_default();
    let rows: Vec<&str> = lines.collect();
    if header.starts_with(MICRO_MAGIC) {
        let f = header_fields(header, MICRO_MAGIC)?;
        let (t, n, length): (f64, usize, f64) = (field(&f, "t")?, field(&f, "n")?, field(&f, "L")?);
        if columns != MICRO_COLUMNS {
            return Err(Error::Snapshot(format!("expected columns `{MICRO_COLUMNS}`")));
        }
        if rows.len() != n {
            return Err(Error::Snapshot(format!("header says n={n} but file has {} rows", rows.len())));
        }
        let (mut pos, mut theta, mut omega) = (Vec::with_capacity(n), Vec::with_capacity(n), Vec::with_capacity(n));
        for (k, line) in rows.iter().enumerate() {
            let [id, x, y, th, w] = parse_row::<5>(line, k + 3)?;
            if id != k as f64 {
                return Err(Error::Snapshot(format!("line {}: expected id {k}", k + 3)));
            }
            pos.push([x, y]);
            theta.push(th);
            omega.push(w);
        }
        let ensemble = ParticleEnsemble { length, pos, theta, omega };
        Ok(Snapshot::Micro(ParticleSnapshot { t, ensemble }))
    } else if header.starts_with(MACRO_MAGIC) {
        let f = header_fields(header, MACRO_MAGIC)?;
        let (t, nx, ny, length): (f64, usize, usize, f64) =
            (field(&f, "t")?, field(&f, "nx")?, field(&f, "ny")?, field(&f, "L")?);
        if columns != MACRO_COLUMNS {
            return Err(Error::Snapshot(format!("expected columns `{MACRO_COLUMNS}`")));
        }
        if rows.len() != nx * ny {
            return Err(Error::Snapshot(format!(
                "header says nx*ny={} but file has {} rows",
                nx * ny,
                rows.len()
            )));
        }
        let mut g = GridSnapshot {
            t,
            nx,
            ny,
            length,
            rho: Vec::with_capacity(rows.len()),
            omega_bar: Vec::with_capacity(rows.len()),
            dir: Vec::with_capacity(rows.len()),
        };
        for (k, line) in rows.iter().enumerate() {
            let [i, j, rho, w, ox, oy] = parse_row::<6>(line, k + 3)?;
            if i != (k % nx) as f64 || j != (k / nx) as f64 {
                return Err(Error::Snapshot(format!("line {}: cell index out of order", k + 3)));
            }
            g.rho.push(rho);
            g.omega_bar.push(w);
            g.dir.push([ox, oy]);
        }
        Ok(Snapshot::Macro(g))
    } else {
        Err(Error::Snapshot(format!("unknown header `{header}`")))
    }
}

pub fn write_snapshot(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

pub fn read_snapshot(path: &Path) -> Result<Snapshot> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_snapshot(&text)
}

/// Snapshot files of a directory, in write order.
pub fn list_snapshots(dir: &Path) -> Result<Vec<PathBuf>> {
    let mut out: Vec<PathBuf> = fs::read_dir(dir)
        .map_err(|e| Error::io(dir, e))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| {
            p.file_name()
                .and_then(|n| n.to_str())
                .is_some_and(|n| n.starts_with("snap_") && n.ends_with(".csv"))
        })
        .collect();
    out.sort();
    Ok(out)
}

/// Writes numbered snapshot files `snap_000000.csv`, `snap_000001.csv`, ...
#[derive(Debug)]
pub struct DirSink {
    dir: PathBuf,
    next: usize,
}

impl DirSink {
    /// Creates the directory if needed.
    pub fn create(dir: impl Into<PathBuf>) -> Result<Self> {
        let dir = dir.into();
        fs::create_dir_all(&dir).map_err(|e| Error::io(&dir, e))?;
        Ok(Self { dir, next: 0 })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn written(&self) -> usize {
        self.next
    }
}

impl SnapshotSink<f64> for DirSink {
    fn write(&mut self, t: f64, snapshot: SnapshotRef<'_, f64>) -> Result<()> {
        let text = match snapshot {
            SnapshotRef::Micro(e) => format_micro(t, e),
            SnapshotRef::Macro(s) => format_macro(&GridSnapshot::from_state(t, s)),
        };
        let path = self.dir.join(format!("snap_{:06}.csv", self.next));
        write_snapshot(&path, &text)?;
        self.next += 1;
        Ok(())
    }
}
