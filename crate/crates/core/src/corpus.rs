//! graph6 codec, line-oriented corpus streaming and labeled enumeration.

use std::fs::File;
use std::io::{self, BufRead, BufReader};
use std::path::Path;

use crate::canon::is_canonical_labeling;
use crate::error::{Error, Graph6Error, Result};
use crate::graph::{pair_count, Graph, MAX_ORDER};

const HEADER: &[u8] = b">>graph6<<";

/// Decodes one graph6 record (no line terminator).
pub fn parse_graph6(bytes: &[u8]) -> Result<Graph> {
    let bytes = bytes.strip_prefix(HEADER).unwrap_or(bytes);
    if bytes.starts_with(b">>sparse6<<") || bytes.first() == Some(&b':') {
        return Err(Graph6Error::Sparse6.into());
    }
    if bytes.starts_with(b">>digraph6<<") || bytes.first() == Some(&b'&') {
        return Err(Graph6Error::Digraph6.into());
    }
    let (&head, data) = bytes.split_first().ok_or(Graph6Error::Empty)?;
    if head == 126 {
        return Err(Error::OrderCap(format!(
            "graph6 multi-byte header (n > {MAX_ORDER}) is not supported"
        )));
    }
    if !(63..=125).contains(&head) {
        return Err(Graph6Error::BadHeader(head).into());
    }
    let n = (head - 63) as usize;
    if n == 0 {
        return Err(Graph6Error::ZeroOrder.into());
    }
    let bits = pair_count(n);
    let expected = bits.div_ceil(6);
    if data.len() < expected {
        return Err(Graph6Error::TruncatedRecord {
            expected,
            found: data.len(),
        }
        .into());
    }
    if data.len() > expected {
        return Err(Graph6Error::TrailingData(data.len() - expected).into());
    }
    for (offset, &b) in data.iter().enumerate() {
        if !(63..=126).contains(&b) {
            return Err(Graph6Error::InvalidByte {
                byte: b,
                offset: offset + 1,
            }
            .into());
        }
    }
    let pad = expected * 6 - bits;
    if pad > 0 && (data[expected - 1] - 63) & ((1 << pad) - 1) != 0 {
        return Err(Graph6Error::NonzeroPadding.into());
    }
    let mut g = Graph::empty(n)?;
    let mut k = 0;
    for j in 1..n {
        for i in 0..j {
            let byte = data[k / 6] - 63;
            if (byte >> (5 - k % 6)) & 1 == 1 {
                g.set_edge(i, j);
            }
            k += 1;
        }
    }
    Ok(g)
}

/// Encodes `g` under its current labeling.
pub fn write_graph6(g: &Graph) -> String {
    let n = g.order();
    let bits = pair_count(n);
    let mut out = Vec::with_capacity(1 + bits.div_ceil(6));
    out.push(n as u8 + 63);
    let mut acc = 0u8;
    let mut k = 0;
    for j in 1..n {
        for i in 0..j {
            acc = (acc << 1) | u8::from(g.has_edge(i, j));
            k += 1;
            if k % 6 == 0 {
                out.push(acc + 63);
                acc = 0;
            }
        }
    }
    if k % 6 != 0 {
        out.push((acc << (6 - k % 6)) + 63);
    }
    String::from_utf8(out).expect("graph6 is ASCII")
}

/// A malformed line: 1-based line number plus the decode failure.
#[derive(Clone, Debug, PartialEq)]
pub struct Diagnostic {
    pub line: usize,
    pub reason: String,
}

impl std::fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "line {}: {}", self.line, self.reason)
    }
}

/// A successfully decoded line.
#[derive(Clone, Debug)]
pub struct Graph6Record {
    pub origin: usize,
    pub graph: Graph,
}

/// Lazy reader over line-delimited graph6. Blank lines are skipped;
/// malformed lines go to [`Graph6Stream::diagnostics`]. Only I/O failures
/// surface as `Err` items, after which the stream ends.
pub struct Graph6Stream<R> {
    reader: R,
    name: String,
    line: usize,
    buf: Vec<u8>,
    diagnostics: Vec<Diagnostic>,
    done: bool,
}

impl<R: BufRead> Graph6Stream<R> {
    pub fn new(reader: R, name: impl Into<String>) -> Self {
        Graph6Stream {
            reader,
            name: name.into(),
            line: 0,
            buf: Vec::new(),
            diagnostics: Vec::new(),
            done: false,
        }
    }

    pub fn diagnostics(&self) -> &[Diagnostic] {
        &self.diagnostics
    }

    pub fn take_diagnostics(&mut self) -> Vec<Diagnostic> {
        std::mem::take(&mut self.diagnostics)
    }
}

impl<R: BufRead> Iterator for Graph6Stream<R> {
    type Item = Result<Graph6Record>;

    fn next(&mut self) -> Option<Self::Item> {
        while !self.done {
            self.buf.clear();
            match self.reader.read_until(b'\n', &mut self.buf) {
                Ok(0) => self.done = true,
                Ok(_) => {
                    self.line += 1;
                    let rec = self.buf.trim_ascii();
                    if rec.is_empty() {
                        continue;
                    }
                    match parse_graph6(rec) {
                        Ok(graph) => {
                            return Some(Ok(Graph6Record {
                                origin: self.line,
                                graph,
                            }))
                        }
                        Err(e) => self.diagnostics.push(Diagnostic {
                            line: self.line,
                            reason: e.to_string(),
                        }),
                    }
                }
                Err(e) => {
                    self.done = true;
                    return Some(Err(io_error(&self.name, &e)));
                }
            }
        }
        None
    }
}

fn io_error(path: &str, e: &io::Error) -> Error {
    Error::Io {
        path: path.to_string(),
        message: e.to_string(),
    }
}

/// Opens a file, or standard input for `"-"`.
pub fn stream_graph6(source: &str) -> Result<Graph6Stream<Box<dyn BufRead + Send>>> {
    let reader: Box<dyn BufRead + Send> = if source == "-" {
        Box::new(BufReader::new(io::stdin()))
    } else {
        let f = File::open(Path::new(source)).map_err(|e| io_error(source, &e))?;
        Box::new(BufReader::new(f))
    };
    let name = if source == "-" { "<stdin>" } else { source };
    Ok(Graph6Stream::new(reader, name))
}

/// Largest order for exhaustive labeled enumeration.
pub const ENUMERATION_MAX_ORDER: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EnumerationMode {
    Labeled,
    /// One representative per isomorphism class: the labeled graph equal
    /// to its own canonical form.
    CanonicalDeduped,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EnumerationSpec {
    pub n: usize,
    pub mode: EnumerationMode,
    pub shard_count: u64,
    pub shard_index: u64,
}

impl EnumerationSpec {
    pub fn labeled(n: usize) -> Self {
        EnumerationSpec {
            n,
            mode: EnumerationMode::Labeled,
            shard_count: 1,
            shard_index: 0,
        }
    }

    pub fn deduped(n: usize) -> Self {
        EnumerationSpec {
            mode: EnumerationMode::CanonicalDeduped,
            ..Self::labeled(n)
        }
    }

    pub fn sharded(self, shard_count: u64, shard_index: u64) -> Self {
        EnumerationSpec {
            shard_count,
            shard_index,
            ..self
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::InvalidArgument("enumeration needs n >= 1".into()));
        }
        if self.n > ENUMERATION_MAX_ORDER {
            return Err(Error::OrderCap(format!(
                "labeled enumeration supports n <= {ENUMERATION_MAX_ORDER}, got {}; supply a graph6 stream instead",
                self.n
            )));
        }
        if self.shard_count == 0 || self.shard_index >= self.shard_count {
            return Err(Error::InvalidArgument(format!(
                "shard {} of {} is out of range",
                self.shard_index, self.shard_count
            )));
        }
        Ok(())
    }

    /// Total number of labeled graphs of order `n`.
    pub fn space_size(&self) -> u64 {
        1u64 << pair_count(self.n)
    }

    /// Pair masks of this shard in ascending order (before dedup).
    pub fn masks(&self) -> impl Iterator<Item = u64> {
        let (s, i) = (self.shard_count, self.shard_index);
        (i..self.space_size()).step_by(s as usize)
    }
}

/// Every labeled graph of the shard, in ascending pair-mask order.
pub fn enumerate_labeled(spec: EnumerationSpec) -> Result<impl Iterator<Item = Graph>> {
    spec.validate()?;
    let n = spec.n;
    let dedup = spec.mode == EnumerationMode::CanonicalDeduped;
    Ok(spec.masks().filter_map(move |m| {
        let g = Graph::from_pair_mask(n, m).expect("n <= 8");
        if dedup && !is_canonical_labeling(&g).expect("n <= 8") {
            None
        } else {
            Some(g)
        }
    }))
}
