//! Period-aligned time series.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Named columns aligned to strictly increasing period labels.
/// Missing values are `None`.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SeriesTable {
    periods: Vec<String>,
    columns: BTreeMap<String, Vec<Option<f64>>>,
}

impl SeriesTable {
    pub fn new(periods: Vec<String>) -> Result<Self> {
        if let Some(w) = periods.windows(2).find(|w| w[0] >= w[1]) {
            return Err(Error::invalid(format!(
                "periods not strictly increasing: `{}` then `{}`",
                w[0], w[1]
            )));
        }
        Ok(SeriesTable {
            periods,
            columns: BTreeMap::new(),
        })
    }

    pub fn insert(&mut self, name: impl Into<String>, values: Vec<Option<f64>>) -> Result<()> {
        let name = name.into();
        if values.len() != self.periods.len() {
            return Err(Error::invalid(format!(
                "column `{name}` has {} values for {} periods",
                values.len(),
                self.periods.len()
            )));
        }
        self.columns.insert(name, values);
        Ok(())
    }

    pub fn periods(&self) -> &[String] {
        &self.periods
    }

    pub fn column(&self, name: &str) -> Option<&[Option<f64>]> {
        self.columns.get(name).map(Vec::as_slice)
    }

    pub fn columns(&self) -> impl Iterator<Item = (&str, &[Option<f64>])> {
        self.columns.iter().map(|(k, v)| (k.as_str(), v.as_slice()))
    }

    pub fn len(&self) -> usize {
        self.periods.len()
    }

    pub fn is_empty(&self) -> bool {
        self.periods.is_empty()
    }
}
