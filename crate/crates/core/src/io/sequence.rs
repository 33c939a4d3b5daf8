use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::model::{SampleHeader, SequenceSample};

/// First line of a version-1 sequence file.
pub const SEQUENCE_MAGIC: &str = "pseudopowers-sequence v1";

/// Text format: the magic line, `key = value` lines for `s`, `N`, `seed`,
/// `trial_id` and `count`, then the elements one per line, then `end`.
pub fn write_sequence<W: Write>(sample: &SequenceSample, mut w: W) -> Result<()> {
    let h = sample.header();
    writeln!(w, "{SEQUENCE_MAGIC}")?;
    writeln!(w, "s = {}", h.s)?;
    writeln!(w, "N = {}", h.limit)?;
    writeln!(w, "seed = {}", h.seed)?;
    writeln!(w, "trial_id = {}", h.trial_id)?;
    writeln!(w, "count = {}", sample.len())?;
    for a in sample.elements() {
        writeln!(w, "{a}")?;
    }
    writeln!(w, "end")?;
    w.flush()?;
    Ok(())
}

fn header_value(
    lines: &mut impl Iterator<Item = std::io::Result<String>>,
    key: &str,
) -> Result<u64> {
    let line = lines
        .next()
        .ok_or_else(|| Error::format(format!("truncated header: missing `{key}`")))??;
    let (k, v) = line
        .split_once('=')
        .ok_or_else(|| Error::format(format!("malformed header line `{line}`")))?;
    if k.trim() != key {
        return Err(Error::format(format!(
            "expected header `{key}`, found `{}`",
            k.trim()
        )));
    }
    v.trim()
        .parse()
        .map_err(|_| Error::format(format!("header `{key}` is not an integer: `{}`", v.trim())))
}

pub fn read_sequence<R: Read>(r: R) -> Result<SequenceSample> {
    let mut lines = BufReader::new(r).lines();
    let magic = lines
        .next()
        .ok_or_else(|| Error::format("empty sequence file"))??;
    if magic.trim_end() != SEQUENCE_MAGIC {
        return Err(Error::format(format!(
            "unsupported sequence format `{}` (expected `{SEQUENCE_MAGIC}`)",
            magic.trim_end()
        )));
    }
    let s = header_value(&mut lines, "s")?;
    let limit = header_value(&mut lines, "N")?;
    let seed = header_value(&mut lines, "seed")?;
    let trial_id = header_value(&mut lines, "trial_id")?;
    let count = header_value(&mut lines, "count")?;
    let s = u32::try_from(s).map_err(|_| Error::format(format!("s = {s} out of range")))?;
    if count > limit {
        return Err(Error::format(format!("count {count} exceeds N = {limit}")));
    }
    let mut elements = Vec::with_capacity(count as usize);
    for i in 0..count {
        let line = lines.next().ok_or_else(|| {
            Error::format(format!("truncated: {i} of {count} elements present"))
        })??;
        let a = line.trim().parse().map_err(|_| {
            Error::format(format!(
                "element line {} is not an integer: `{line}`",
                i + 1
            ))
        })?;
        elements.push(a);
    }
    match lines.next().transpose()? {
        Some(l) if l.trim() == "end" => {}
        Some(l) => {
            return Err(Error::format(format!(
                "expected `end` after {count} elements, found `{l}`"
            )))
        }
        None => return Err(Error::format("truncated: missing `end` marker")),
    }
    if let Some(l) = lines.next().transpose()? {
        if !l.trim().is_empty() {
            return Err(Error::format(format!("trailing data after `end`: `{l}`")));
        }
    }
    let header = SampleHeader {
        s,
        limit,
        seed,
        trial_id,
    };
    SequenceSample::from_elements(header, elements)
}

pub fn save_sequence(sample: &SequenceSample, path: &Path) -> Result<()> {
    write_sequence(sample, BufWriter::new(File::create(path)?))
}

pub fn load_sequence(path: &Path) -> Result<SequenceSample> {
    read_sequence(File::open(path)?)
}
