//! Per-order analysis pipeline and the CSV result cache.

use std::collections::BTreeMap;
use std::fs::{self, File, OpenOptions};
use std::io::{BufRead, BufReader, Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::bounds::{bound_report, BoundReport, Classification};
use crate::clique::{max_clique, CliqueResult};
use crate::error::{Error, Result};
use crate::ffield::{CharacterTable, FieldSpec};
use crate::paley::PaleyGraph;
use crate::phi::{self, BestT, DSet, PhiProfile};
use crate::primes::odd_prime_power;

pub const SCHEMA_LINE: &str = "# schema=1";

/// One cached result. Every field except `wall_time_ms` is a pure function of `q`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResultRow {
    pub q: u64,
    pub p: u64,
    pub k: u32,
    pub n: u64,
    pub s_exact: u64,
    pub trivial_bound: u64,
    pub theorem_bound: u64,
    pub improved: bool,
    pub classification: Classification,
    pub phi_min: i64,
    pub r_best: u64,
    pub lemma_bound: u64,
    pub third_moment: i64,
    pub nodes_explored: u64,
    pub wall_time_ms: u64,
}

impl ResultRow {
    pub fn same_values(&self, other: &ResultRow) -> bool {
        ResultRow {
            wall_time_ms: other.wall_time_ms,
            ..self.clone()
        } == *other
    }
}

/// Orders q in `[lo, hi]` with q = 1 (mod 4) and q = p^k for an odd prime p.
/// Primes are always included; odd k > 1 with `odd_powers`, even k with `even_powers`.
pub fn admissible_orders(lo: u64, hi: u64, odd_powers: bool, even_powers: bool) -> Vec<u64> {
    (lo.max(5)..=hi)
        .filter(|q| q % 4 == 1)
        .filter(|&q| match odd_prime_power(q) {
            Some((_, 1)) => true,
            Some((_, k)) if k % 2 == 1 => odd_powers,
            Some(_) => even_powers,
            None => false,
        })
        .collect()
}

pub fn field_for(q: u64) -> Result<FieldSpec> {
    let (p, k) = odd_prime_power(q).ok_or(Error::NotPrimePower(q))?;
    FieldSpec::new(p, k, None)
}

/// Everything computed for one order: the exact clique, its profile, the best
/// D-set and, for odd k, the bound report.
#[derive(Debug, Clone)]
pub struct Analysis {
    pub field: FieldSpec,
    pub chi: CharacterTable,
    pub graph: PaleyGraph,
    pub clique: CliqueResult,
    pub profile: PhiProfile,
    pub best: BestT,
    pub dset: DSet,
    pub lemma_bound: u64,
    pub bounds: Option<BoundReport>,
}

pub fn analyze(q: u64) -> Result<Analysis> {
    let field = field_for(q)?;
    let chi = CharacterTable::build(&field)?;
    let graph = PaleyGraph::build(&field, &chi)?;
    analyze_graph(field, chi, graph)
}

/// Runs the pipeline on a prebuilt (possibly perturbed) graph.
pub fn analyze_graph(field: FieldSpec, chi: CharacterTable, graph: PaleyGraph) -> Result<Analysis> {
    let clique = max_clique(&graph);
    let profile = phi::compute_phi(&field, &chi, &clique.witness)?;
    let best = phi::find_best_t(&profile).ok_or(Error::EmptyClique)?;
    let dset = phi::construct_dset(&field, &chi, &clique.witness, best.t)?;
    let lemma_bound = phi::sbound(dset.r as u64, field.q())?.to_integer();
    let bounds = if field.k() % 2 == 1 {
        Some(bound_report(
            field.q(),
            Some(clique.s as u64),
            Some(lemma_bound),
        )?)
    } else {
        None
    };
    Ok(Analysis {
        field,
        chi,
        graph,
        clique,
        profile,
        best,
        dset,
        lemma_bound,
        bounds,
    })
}

impl Analysis {
    /// Cache row; `None` for even k, where the parity bounds do not apply.
    pub fn row(&self, wall_time_ms: u64) -> Option<ResultRow> {
        let b = self.bounds.as_ref()?;
        Some(ResultRow {
            q: b.q,
            p: b.p,
            k: b.k,
            n: b.n,
            s_exact: self.clique.s as u64,
            trivial_bound: b.trivial_bound(),
            theorem_bound: b.theorem_bound,
            improved: b.improved,
            classification: b.classification,
            phi_min: self.best.phi_min,
            r_best: self.dset.r as u64,
            lemma_bound: self.lemma_bound,
            third_moment: phi::third_moment(&self.profile),
            nodes_explored: self.clique.nodes_explored,
            wall_time_ms,
        })
    }
}

fn csv_error(e: csv::Error) -> Error {
    Error::Cache(e.to_string())
}

/// Schema line, header row, then one line per row in the given order.
pub fn write_rows<W: Write>(mut out: W, rows: &[ResultRow]) -> Result<()> {
    writeln!(out, "{SCHEMA_LINE}").map_err(|e| Error::Cache(e.to_string()))?;
    let mut writer = csv::Writer::from_writer(out);
    if rows.is_empty() {
        writer.write_record(HEADER).map_err(csv_error)?;
    }
    for row in rows {
        writer.serialize(row).map_err(csv_error)?;
    }
    writer.flush().map_err(|e| Error::Cache(e.to_string()))
}

const HEADER: [&str; 15] = [
    "q",
    "p",
    "k",
    "n",
    "s_exact",
    "trivial_bound",
    "theorem_bound",
    "improved",
    "classification",
    "phi_min",
    "r_best",
    "lemma_bound",
    "third_moment",
    "nodes_explored",
    "wall_time_ms",
];

/// A single data line without header, for appending.
pub fn row_line(row: &ResultRow) -> Result<String> {
    let mut writer = csv::WriterBuilder::new()
        .has_headers(false)
        .from_writer(Vec::new());
    writer.serialize(row).map_err(csv_error)?;
    let bytes = writer
        .into_inner()
        .map_err(|e| Error::Cache(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Cache(e.to_string()))
}

pub fn read_rows<R: Read>(input: R) -> Result<Vec<ResultRow>> {
    let mut input = BufReader::new(input);
    let mut first = String::new();
    input
        .read_line(&mut first)
        .map_err(|e| Error::Cache(e.to_string()))?;
    if first.trim_end() != SCHEMA_LINE {
        return Err(Error::Cache(format!(
            "expected {SCHEMA_LINE:?}, found {:?}",
            first.trim_end()
        )));
    }
    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_reader(input);
    let header = reader.headers().map_err(csv_error)?;
    if header.iter().ne(HEADER) {
        return Err(Error::Cache(format!("unexpected header {header:?}")));
    }
    reader
        .deserialize()
        .collect::<std::result::Result<Vec<ResultRow>, _>>()
        .map_err(csv_error)
}

/// Rows keyed by q; a missing file is an empty cache. Later duplicates win.
pub fn load_cache(path: &Path) -> Result<BTreeMap<u64, ResultRow>> {
    match File::open(path) {
        Ok(f) => Ok(read_rows(f)?.into_iter().map(|r| (r.q, r)).collect()),
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(BTreeMap::new()),
        Err(e) => Err(Error::Cache(e.to_string())),
    }
}

/// Rewrites the cache sorted by q via a temporary file and rename.
pub fn save_cache(path: &Path, rows: &BTreeMap<u64, ResultRow>) -> Result<()> {
    let tmp = path.with_extension("csv.tmp");
    let rows: Vec<ResultRow> = rows.values().cloned().collect();
    {
        let file = File::create(&tmp).map_err(|e| Error::Cache(e.to_string()))?;
        write_rows(file, &rows)?;
    }
    fs::rename(&tmp, path).map_err(|e| Error::Cache(e.to_string()))
}

/// Appends complete rows to an existing or new cache, one flushed line per row.
pub struct CacheAppender {
    file: File,
}

impl CacheAppender {
    pub fn open(path: &Path) -> Result<Self> {
        let fresh = !path.exists() || fs::metadata(path).map(|m| m.len() == 0).unwrap_or(true);
        let mut file = OpenOptions::new()
            .create(true)
            .append(true)
            .open(path)
            .map_err(|e| Error::Cache(e.to_string()))?;
        if fresh {
            let mut head = Vec::new();
            write_rows(&mut head, &[])?;
            file.write_all(&head)
                .map_err(|e| Error::Cache(e.to_string()))?;
        }
        Ok(CacheAppender { file })
    }

    pub fn append(&mut self, row: &ResultRow) -> Result<()> {
        let line = row_line(row)?;
        self.file
            .write_all(line.as_bytes())
            .and_then(|_| self.file.flush())
            .map_err(|e| Error::Cache(e.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn admissible_order_sets() {
        assert_eq!(
            admissible_orders(5, 100, false, false),
            vec![5, 13, 17, 29, 37, 41, 53, 61, 73, 89, 97]
        );
        assert_eq!(
            admissible_orders(1, 30, true, true),
            vec![5, 9, 13, 17, 25, 29]
        );
        assert_eq!(
            admissible_orders(100, 130, true, false),
            vec![101, 109, 113, 125]
        );
        assert!(admissible_orders(4, 4, true, true).is_empty());
    }

    #[test]
    fn analysis_row_for_29() {
        let a = analyze(29).unwrap();
        let row = a.row(0).unwrap();
        assert_eq!((row.s_exact, row.n, row.theorem_bound), (4, 5, 4));
        assert!(row.improved);
        assert_eq!(row.classification, Classification::CaseIIImproved);
        assert!(row.lemma_bound >= row.s_exact);
        assert!(analyze(9).unwrap().row(0).is_none());
    }

    #[test]
    fn schema_is_enforced() {
        assert!(matches!(
            read_rows("q,p\n".as_bytes()),
            Err(Error::Cache(_))
        ));
        let mut buf = Vec::new();
        write_rows(&mut buf, &[]).unwrap();
        assert_eq!(read_rows(buf.as_slice()).unwrap(), vec![]);
        assert!(String::from_utf8(buf)
            .unwrap()
            .starts_with("# schema=1\nq,p,k,n,s_exact,"));
    }

    #[test]
    fn append_then_load() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("cache.csv");
        let rows: Vec<ResultRow> = [13, 5]
            .iter()
            .map(|&q| analyze(q).unwrap().row(7).unwrap())
            .collect();
        let mut app = CacheAppender::open(&path).unwrap();
        for r in &rows {
            app.append(r).unwrap();
        }
        drop(app);
        let loaded = load_cache(&path).unwrap();
        assert_eq!(loaded.keys().copied().collect::<Vec<_>>(), vec![5, 13]);
        assert_eq!(loaded[&13], rows[0]);
        save_cache(&path, &loaded).unwrap();
        assert_eq!(load_cache(&path).unwrap(), loaded);
    }

    fn arb_row() -> impl Strategy<Value = ResultRow> {
        (
            (
                any::<u64>(),
                any::<u64>(),
                any::<u32>(),
                any::<u64>(),
                any::<u64>(),
            ),
            (any::<u64>(), any::<u64>(), any::<bool>(), 0usize..4),
            (
                any::<i64>(),
                any::<u64>(),
                any::<u64>(),
                any::<i64>(),
                any::<u64>(),
                any::<u64>(),
            ),
        )
            .prop_map(
                |((q, p, k, n, s), (tb, thb, imp, c), (pm, r, lb, tm, ne, wt))| ResultRow {
                    q,
                    p,
                    k,
                    n,
                    s_exact: s,
                    trivial_bound: tb,
                    theorem_bound: thb,
                    improved: imp,
                    classification: Classification::ALL[c],
                    phi_min: pm,
                    r_best: r,
                    lemma_bound: lb,
                    third_moment: tm,
                    nodes_explored: ne,
                    wall_time_ms: wt,
                },
            )
    }

    proptest! {
        #[test]
        fn cache_roundtrip(rows in proptest::collection::vec(arb_row(), 0..8)) {
            let mut buf = Vec::new();
            write_rows(&mut buf, &rows).unwrap();
            prop_assert_eq!(read_rows(buf.as_slice()).unwrap(), rows);
        }
    }
}
