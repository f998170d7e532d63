//! Firm attributes and the CSV formats for firms and edges.

use std::collections::HashMap;
use std::fmt;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::network::Network;
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FirmType {
    AngelGroup,
    BankAffiliated,
    CorporateVenture,
    EndowmentFoundationPension,
    GovernmentAffiliated,
    Incubator,
    Individuals,
    InsuranceAffiliate,
    InvestmentManagement,
    FundOfFunds,
    PrivateEquity,
    Sbic,
    ServiceProvider,
    UniversityProgram,
}

impl FirmType {
    pub const ALL: [FirmType; 14] = [
        FirmType::AngelGroup,
        FirmType::BankAffiliated,
        FirmType::CorporateVenture,
        FirmType::EndowmentFoundationPension,
        FirmType::GovernmentAffiliated,
        FirmType::Incubator,
        FirmType::Individuals,
        FirmType::InsuranceAffiliate,
        FirmType::InvestmentManagement,
        FirmType::FundOfFunds,
        FirmType::PrivateEquity,
        FirmType::Sbic,
        FirmType::ServiceProvider,
        FirmType::UniversityProgram,
    ];

    pub fn label(self) -> &'static str {
        match self {
            FirmType::AngelGroup => "Angel Group",
            FirmType::BankAffiliated => "Bank Affiliated",
            FirmType::CorporateVenture => "Corporate PE/Venture",
            FirmType::EndowmentFoundationPension => "Endowment/Foundation or Pension Fund",
            FirmType::GovernmentAffiliated => "Government Affiliated Program",
            FirmType::Incubator => "Incubator/Development Program",
            FirmType::Individuals => "Individuals",
            FirmType::InsuranceAffiliate => "Insurance Firm Affiliate",
            FirmType::InvestmentManagement => "Investment Management Firm",
            FirmType::FundOfFunds => "Private Equity Advisor or Fund of Funds",
            FirmType::PrivateEquity => "Private Equity Firm",
            FirmType::Sbic => "SBIC",
            FirmType::ServiceProvider => "Service Provider",
            FirmType::UniversityProgram => "University Program",
        }
    }
}

impl fmt::Display for FirmType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for FirmType {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let s = s.trim();
        FirmType::ALL
            .iter()
            .copied()
            .find(|t| t.label().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown firm type {s:?}"))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Firm<T> {
    pub id: String,
    pub firm_type: FirmType,
    pub state: String,
    pub log_capital: T,
    pub age: T,
}

/// Column-oriented firm attributes. States are interned so equality tests
/// inside the samplers compare integers.
#[derive(Clone, Debug, PartialEq)]
pub struct FirmTable<T> {
    ids: Vec<String>,
    types: Vec<FirmType>,
    state_codes: Vec<u32>,
    state_names: Vec<String>,
    log_capital: Vec<T>,
    age: Vec<T>,
}

impl<T: Scalar> FirmTable<T> {
    /// Builds a table in the given order. Ids must be unique, capital and age finite, age non-negative.
    pub fn new(firms: impl IntoIterator<Item = Firm<T>>) -> Result<Self> {
        let mut table = FirmTable {
            ids: Vec::new(),
            types: Vec::new(),
            state_codes: Vec::new(),
            state_names: Vec::new(),
            log_capital: Vec::new(),
            age: Vec::new(),
        };
        let mut seen = HashMap::new();
        for (row, firm) in firms.into_iter().enumerate() {
            if seen.insert(firm.id.clone(), row).is_some() {
                return Err(Error::input("firms", row + 1, format!("duplicate id {:?}", firm.id)));
            }
            if !firm.log_capital.is_finite() || !firm.age.is_finite() || firm.age < T::zero() {
                return Err(Error::input("firms", row + 1, "attributes must be finite, age >= 0"));
            }
            table.push(firm);
        }
        Ok(table)
    }

    fn push(&mut self, firm: Firm<T>) {
        let code = match self.state_names.iter().position(|s| *s == firm.state) {
            Some(c) => c,
            None => {
                self.state_names.push(firm.state.clone());
                self.state_names.len() - 1
            }
        };
        self.ids.push(firm.id);
        self.types.push(firm.firm_type);
        self.state_codes.push(code as u32);
        self.log_capital.push(firm.log_capital);
        self.age.push(firm.age);
    }

    /// Appends a firm. The id must be new.
    pub fn append(&mut self, firm: Firm<T>) -> Result<()> {
        if self.ids.contains(&firm.id) {
            return Err(Error::Config(format!("duplicate firm id {:?}", firm.id)));
        }
        self.push(firm);
        Ok(())
    }

    /// Restriction to `keep` (ascending indices), in that order.
    pub fn select(&self, keep: &[usize]) -> Self {
        FirmTable::new(keep.iter().map(|&i| self.firm(i))).expect("subset of a valid table")
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.ids.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn firm(&self, i: usize) -> Firm<T> {
        Firm {
            id: self.ids[i].clone(),
            firm_type: self.types[i],
            state: self.state_names[self.state_codes[i] as usize].clone(),
            log_capital: self.log_capital[i],
            age: self.age[i],
        }
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.ids.iter().position(|s| s == id)
    }

    #[inline]
    pub fn firm_type(&self, i: usize) -> FirmType {
        self.types[i]
    }

    #[inline]
    pub fn state(&self, i: usize) -> &str {
        &self.state_names[self.state_codes[i] as usize]
    }

    #[inline]
    pub fn log_capital(&self, i: usize) -> T {
        self.log_capital[i]
    }

    pub fn log_capitals(&self) -> &[T] {
        &self.log_capital
    }

    #[inline]
    pub fn age(&self, i: usize) -> T {
        self.age[i]
    }

    pub fn ages(&self) -> &[T] {
        &self.age
    }

    #[inline]
    pub fn same_type(&self, i: usize, j: usize) -> bool {
        self.types[i] == self.types[j]
    }

    #[inline]
    pub fn same_state(&self, i: usize, j: usize) -> bool {
        self.state_codes[i] == self.state_codes[j]
    }

    #[inline]
    pub fn capital_gap(&self, i: usize, j: usize) -> T {
        (self.log_capital[i] - self.log_capital[j]).abs()
    }

    #[inline]
    pub fn age_gap(&self, i: usize, j: usize) -> T {
        (self.age[i] - self.age[j]).abs()
    }

    /// Number of distinct firm types present.
    pub fn distinct_types(&self) -> usize {
        let mut t = self.types.clone();
        t.sort();
        t.dedup();
        t.len()
    }
}

const FIRMS_HEADER: [&str; 5] = ["id", "type", "state", "capital_musd", "age"];
const EDGES_HEADER: [&str; 2] = ["src", "dst"];

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

/// Non-empty data rows with their 1-based line numbers, after checking the header.
fn rows<'a>(text: &'a str, header: &[&str], file: &str) -> Result<Vec<(usize, Vec<&'a str>)>> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let (hrow, hline) = lines.next().ok_or_else(|| Error::input(file, 1, "missing header"))?;
    let got: Vec<&str> = hline.trim_start_matches('\u{feff}').split(',').map(str::trim).collect();
    if got != header {
        return Err(Error::input(file, hrow + 1, format!("expected header {}", header.join(","))));
    }
    lines
        .map(|(row, line)| {
            let fields: Vec<&str> = line.split(',').map(str::trim).collect();
            if fields.len() != header.len() {
                Err(Error::input(file, row + 1, format!("expected {} fields, got {}", header.len(), fields.len())))
            } else {
                Ok((row + 1, fields))
            }
        })
        .collect()
}

/// Parses the firms CSV (`id,type,state,capital_musd,age`). Capital is converted to
/// natural-log millions; rows are returned sorted by id.
pub fn parse_firms<T: Scalar>(text: &str) -> Result<FirmTable<T>> {
    const F: &str = "firms";
    let mut firms = Vec::new();
    let mut seen: HashMap<String, usize> = HashMap::new();
    for (row, f) in rows(text, &FIRMS_HEADER, F)? {
        if f.iter().any(|v| v.is_empty()) {
            return Err(Error::input(F, row, "missing value"));
        }
        if let Some(prev) = seen.insert(f[0].to_string(), row) {
            return Err(Error::input(F, row, format!("duplicate id {:?} (first at row {prev})", f[0])));
        }
        let firm_type = f[1].parse::<FirmType>().map_err(|e| Error::input(F, row, e))?;
        let capital: f64 = f[3]
            .parse()
            .map_err(|_| Error::input(F, row, format!("malformed capital {:?}", f[3])))?;
        if !(capital > 0.0) || !capital.is_finite() {
            return Err(Error::input(F, row, "non-positive capital"));
        }
        let age: f64 = f[4]
            .parse()
            .map_err(|_| Error::input(F, row, format!("malformed age {:?}", f[4])))?;
        if !(age >= 0.0) || !age.is_finite() {
            return Err(Error::input(F, row, "age must be a non-negative number"));
        }
        firms.push(Firm {
            id: f[0].to_string(),
            firm_type,
            state: f[2].to_string(),
            log_capital: T::of(capital.ln()),
            age: T::of(age),
        });
    }
    firms.sort_by(|a, b| a.id.cmp(&b.id));
    FirmTable::new(firms)
}

pub fn load_firms<T: Scalar>(path: impl AsRef<Path>) -> Result<FirmTable<T>> {
    parse_firms(&read(path.as_ref())?)
}

/// Parses the edges CSV (`src,dst`) against the firm ids.
pub fn parse_edges<T: Scalar>(text: &str, firms: &FirmTable<T>) -> Result<Network> {
    const F: &str = "edges";
    let index: HashMap<&str, usize> = firms.ids().iter().enumerate().map(|(i, s)| (s.as_str(), i)).collect();
    let mut g = Network::empty(firms.len());
    for (row, f) in rows(text, &EDGES_HEADER, F)? {
        let lookup = |id: &str| index.get(id).copied().ok_or_else(|| Error::input(F, row, format!("unknown id {id:?}")));
        let (i, j) = (lookup(f[0])?, lookup(f[1])?);
        if i == j {
            return Err(Error::input(F, row, format!("self-loop on {:?}", f[0])));
        }
        g.set(i, j, true);
    }
    Ok(g)
}

pub fn load_edges<T: Scalar>(path: impl AsRef<Path>, firms: &FirmTable<T>) -> Result<Network> {
    parse_edges(&read(path.as_ref())?, firms)
}

/// Edge list in the `src,dst` format, one line per unordered pair.
pub fn format_edges<T: Scalar>(g: &Network, firms: &FirmTable<T>) -> String {
    let mut out = String::from("src,dst\n");
    for (i, j) in g.edges() {
        out.push_str(&firms.ids()[i]);
        out.push(',');
        out.push_str(&firms.ids()[j]);
        out.push('\n');
    }
    out
}

pub fn save_edges<T: Scalar>(path: impl AsRef<Path>, g: &Network, firms: &FirmTable<T>) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, format_edges(g, firms)).map_err(|e| Error::io(path, e))
}

/// Firms in the input CSV format; capital is written back as `exp(log_capital)`.
pub fn format_firms<T: Scalar>(firms: &FirmTable<T>) -> String {
    let mut out = FIRMS_HEADER.join(",");
    out.push('\n');
    for i in 0..firms.len() {
        let f = firms.firm(i);
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            f.id,
            f.firm_type,
            f.state,
            f.log_capital.as_f64().exp(),
            f.age.as_f64()
        ));
    }
    out
}

pub fn save_firms<T: Scalar>(path: impl AsRef<Path>, firms: &FirmTable<T>) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, format_firms(firms)).map_err(|e| Error::io(path, e))
}
