use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::{Class, GaussianFactor, MeasureError, Result, SeqGen};

/// Generators for one row: precisions b and means a.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RowGen {
    pub b: SeqGen,
    pub a: SeqGen,
}

/// JSON form of a measure: `{"m":3,"window":N,"rows":[{"b":{...},"a":{...}}],"tags":{...}}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpecFile {
    pub m: usize,
    pub window: usize,
    pub rows: Vec<RowGen>,
    #[serde(default)]
    pub tags: BTreeMap<String, Class>,
}

/// Product measure ⊗_{r,n} μ_(b_rn, a_rn) materialized on n = −N..N.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MeasureSpec {
    pub m: usize,
    pub window: usize,
    b: Vec<Vec<f64>>,
    a: Vec<Vec<f64>>,
    pub tags: BTreeMap<String, Class>,
    #[serde(skip)]
    rows: Option<Vec<RowGen>>,
}

impl MeasureSpec {
    /// Rows indexed 0..m, entries in window order n = −N..N.
    pub fn new(b: Vec<Vec<f64>>, a: Vec<Vec<f64>>) -> Result<Self> {
        let m = b.len();
        if m == 0 || m > 3 {
            return Err(MeasureError::RowCount(m));
        }
        if a.len() != m {
            return Err(MeasureError::Shape(format!("{} b rows but {} a rows", m, a.len())));
        }
        let len = b[0].len();
        if len < 3 || len % 2 == 0 {
            return Err(MeasureError::EmptyWindow);
        }
        let window = len / 2;
        for r in 0..m {
            if b[r].len() != len || a[r].len() != len {
                return Err(MeasureError::Shape("rows must share the window".into()));
            }
            for i in 0..len {
                if GaussianFactor::new(b[r][i], a[r][i]).is_none() {
                    return Err(MeasureError::InvalidFactor {
                        row: r + 1,
                        n: i as i64 - window as i64,
                        b: b[r][i],
                        a: a[r][i],
                    });
                }
            }
        }
        Ok(MeasureSpec { m, window, b, a, tags: BTreeMap::new(), rows: None })
    }

    pub fn from_generators(window: usize, rows: &[RowGen]) -> Result<Self> {
        if window == 0 {
            return Err(MeasureError::EmptyWindow);
        }
        let b = rows.iter().map(|r| r.b.materialize(window)).collect::<Result<Vec<_>>>()?;
        let a = rows.iter().map(|r| r.a.materialize(window)).collect::<Result<Vec<_>>>()?;
        let mut spec = MeasureSpec::new(b, a)?;
        spec.rows = Some(rows.to_vec());
        Ok(spec)
    }

    pub fn from_file(file: &SpecFile) -> Result<Self> {
        if file.rows.len() != file.m {
            return Err(MeasureError::Shape(format!("m = {} but {} rows given", file.m, file.rows.len())));
        }
        Ok(MeasureSpec::from_generators(file.window, &file.rows)?.with_tag_map(file.tags.clone()))
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let file: SpecFile = serde_json::from_str(s).map_err(|e| MeasureError::Json(e.to_string()))?;
        MeasureSpec::from_file(&file)
    }

    pub fn with_tag(mut self, name: &str, class: Class) -> Self {
        self.tags.insert(name.to_string(), class);
        self
    }

    pub fn with_tag_map(mut self, tags: BTreeMap<String, Class>) -> Self {
        self.tags = tags;
        self
    }

    /// Same measure on a different window: regenerated from the generators when
    /// known, otherwise only shrinking is possible.
    pub fn with_window(&self, window: usize) -> Result<Self> {
        if let Some(rows) = &self.rows {
            return Ok(MeasureSpec::from_generators(window, rows)?.with_tag_map(self.tags.clone()));
        }
        if window > self.window || window == 0 {
            return Err(MeasureError::InvalidParam(format!(
                "cannot widen an explicit spec from ±{} to ±{window}",
                self.window
            )));
        }
        let cut = |rows: &Vec<Vec<f64>>| -> Vec<Vec<f64>> {
            rows.iter().map(|r| r[self.window - window..=self.window + window].to_vec()).collect()
        };
        Ok(MeasureSpec::new(cut(&self.b), cut(&self.a))?.with_tag_map(self.tags.clone()))
    }

    pub fn len(&self) -> usize {
        2 * self.window + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Window position of index n.
    pub fn pos(&self, n: i64) -> Result<usize> {
        if n.unsigned_abs() as usize > self.window {
            return Err(MeasureError::OutOfWindow { n, window: self.window });
        }
        Ok((n + self.window as i64) as usize)
    }

    pub fn index_at(&self, pos: usize) -> i64 {
        pos as i64 - self.window as i64
    }

    /// Row r is 1-based.
    pub fn b_row(&self, r: usize) -> &[f64] {
        &self.b[r - 1]
    }

    pub fn a_row(&self, r: usize) -> &[f64] {
        &self.a[r - 1]
    }

    pub fn b_at(&self, r: usize, pos: usize) -> f64 {
        self.b[r - 1][pos]
    }

    pub fn a_at(&self, r: usize, pos: usize) -> f64 {
        self.a[r - 1][pos]
    }

    pub fn factor(&self, r: usize, n: i64) -> Result<GaussianFactor> {
        let p = self.pos(n)?;
        Ok(GaussianFactor { b: self.b[r - 1][p], a: self.a[r - 1][p] })
    }

    pub fn require_rows(&self, m: usize) -> Result<()> {
        if self.m == m {
            Ok(())
        } else {
            Err(MeasureError::RowCount(self.m))
        }
    }

    pub fn generators(&self) -> Option<&[RowGen]> {
        self.rows.as_deref()
    }

    /// b' = (1, b_2/b_1, b_3/b_1), a' = a·√b_1 column by column.
    pub fn normalize_row_one(&self) -> Result<MeasureSpec> {
        let b1 = self.b[0].clone();
        let b = self.b.iter().map(|row| row.iter().zip(&b1).map(|(x, d)| x / d).collect()).collect();
        let a = self.a.iter().map(|row| row.iter().zip(&b1).map(|(x, d)| x * d.sqrt()).collect()).collect();
        Ok(MeasureSpec::new(b, a)?.with_tag_map(self.tags.clone()))
    }
}
