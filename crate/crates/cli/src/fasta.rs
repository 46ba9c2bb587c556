//! Minimal FASTA reader: `>name` headers, sequence lines concatenated,
//! letters upper-cased. Record order is preserved — the encode command
//! matches alignment rows to sequences by position.

use anyhow::{bail, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Record {
    pub name: String,
    pub letters: String,
}

pub fn parse(text: &str) -> Result<Vec<Record>> {
    let mut records: Vec<Record> = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(name) = line.strip_prefix('>') {
            records.push(Record {
                name: name.trim().to_string(),
                letters: String::new(),
            });
            continue;
        }
        let record = match records.last_mut() {
            Some(record) => record,
            None => bail!("line {}: sequence data before any `>` header", lineno + 1),
        };
        for ch in line.chars() {
            if ch.is_ascii_alphabetic() {
                record.letters.push(ch.to_ascii_uppercase());
            } else if ch == '-' {
                record.letters.push('-');
            } else if !ch.is_whitespace() {
                bail!("line {}: illegal character `{ch}`", lineno + 1);
            }
        }
    }
    if records.is_empty() {
        bail!("no FASTA records found");
    }
    Ok(records)
}
