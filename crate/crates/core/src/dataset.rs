//! Schemas and class-labeled categorical datasets.
//!
//! A schema assigns each attribute a role (invariant, varying or class) and
//! an ordered domain of value strings. Datasets store records as value-id
//! matrices and are immutable once loaded, so they can be shared freely
//! across threads.
//!
//! Value ids are assigned by first appearance in the data and then frozen;
//! every downstream ordering uses `(attribute index, value id)`, which makes
//! runs reproducible.

use std::collections::HashMap;
use std::io;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum DataError {
    #[error("schema line {line}: expected `name:role`, got `{text}`")]
    BadSchemaLine { line: usize, text: String },
    #[error("schema line {line}: unknown role `{role}` (expected invariant, varying or class)")]
    UnknownRole { line: usize, role: String },
    #[error("duplicate attribute name `{0}`")]
    DuplicateAttribute(String),
    #[error("no class attribute declared")]
    NoClassAttribute,
    #[error("more than one class attribute declared (`{0}` and `{1}`)")]
    MultipleClassAttributes(String, String),
    #[error("csv header mismatch: {0}")]
    HeaderMismatch(String),
    #[error("row {row}, column `{column}`: empty value (records with missing values are rejected)")]
    MissingValue { row: usize, column: String },
    #[error(
        "class attribute `{attr}` has {found} distinct values, exactly 2 are required; \
         binarize the class column first"
    )]
    ClassCardinality { attr: String, found: usize },
    #[error("attribute `{attr}` exceeds {max} distinct values")]
    DomainOverflow { attr: String, max: usize },
    #[error("attribute `{attr}`: value id {value} out of range")]
    BadValueId { attr: String, value: u16 },
    #[error("row {row}: expected {expected} fields, got {got}")]
    BadFieldCount { row: usize, expected: usize, got: usize },
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] io::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AttributeRole {
    /// Value cannot be changed externally within the application task.
    Invariant,
    /// Value can be changed externally.
    Varying,
    /// Carries the class label.
    Class,
}

impl AttributeRole {
    fn parse(token: &str) -> Option<AttributeRole> {
        match token {
            "invariant" => Some(AttributeRole::Invariant),
            "varying" => Some(AttributeRole::Varying),
            "class" => Some(AttributeRole::Class),
            _ => None,
        }
    }

    pub fn token(self) -> &'static str {
        match self {
            AttributeRole::Invariant => "invariant",
            AttributeRole::Varying => "varying",
            AttributeRole::Class => "class",
        }
    }
}

/// One of the two classes, identified by the order its value was first
/// observed in the class column.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ClassId(u8);

impl ClassId {
    pub const FIRST: ClassId = ClassId(0);
    pub const SECOND: ClassId = ClassId(1);
    pub const BOTH: [ClassId; 2] = [ClassId::FIRST, ClassId::SECOND];

    pub fn from_index(index: usize) -> ClassId {
        assert!(index < 2, "class index must be 0 or 1");
        ClassId(index as u8)
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn other(self) -> ClassId {
        ClassId(1 - self.0)
    }
}

/// Per-class record or support counts.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ClassCounts([u64; 2]);

impl ClassCounts {
    pub const ZERO: ClassCounts = ClassCounts([0, 0]);

    pub fn new(first: u64, second: u64) -> ClassCounts {
        ClassCounts([first, second])
    }

    pub fn get(self, class: ClassId) -> u64 {
        self.0[class.index()]
    }

    pub fn first(self) -> u64 {
        self.0[0]
    }

    pub fn second(self) -> u64 {
        self.0[1]
    }

    pub fn total(self) -> u64 {
        self.0[0] + self.0[1]
    }

    pub fn bump(&mut self, class: ClassId) {
        self.0[class.index()] += 1;
    }

    pub fn add(&mut self, other: ClassCounts) {
        self.0[0] += other.0[0];
        self.0[1] += other.0[1];
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Attribute {
    name: String,
    role: AttributeRole,
    domain: Vec<String>,
}

impl Attribute {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn role(&self) -> AttributeRole {
        self.role
    }

    pub fn domain(&self) -> &[String] {
        &self.domain
    }

    pub fn value(&self, id: u16) -> &str {
        &self.domain[id as usize]
    }

    pub fn value_id(&self, value: &str) -> Option<u16> {
        self.domain.iter().position(|v| v == value).map(|i| i as u16)
    }
}

/// Ordered list of attributes; exactly one has the class role.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AttributeSchema {
    attrs: Vec<Attribute>,
    class_idx: usize,
}

const MAX_DOMAIN: usize = u16::MAX as usize;

impl AttributeSchema {
    /// Builds a schema from `(name, role)` pairs with empty domains, exactly
    /// as [`load_schema`] produces it.
    pub fn new(attrs: Vec<(String, AttributeRole)>) -> Result<AttributeSchema, DataError> {
        Self::with_domains(
            attrs
                .into_iter()
                .map(|(name, role)| (name, role, Vec::new()))
                .collect(),
        )
    }

    /// Builds a schema with pre-declared domains. Used by the data generator
    /// and by tests that construct datasets in memory.
    pub fn with_domains(
        attrs: Vec<(String, AttributeRole, Vec<String>)>,
    ) -> Result<AttributeSchema, DataError> {
        let mut class_idx: Option<usize> = None;
        for (i, (name, role, domain)) in attrs.iter().enumerate() {
            if attrs[..i].iter().any(|(other, _, _)| other == name) {
                return Err(DataError::DuplicateAttribute(name.clone()));
            }
            if domain.len() > MAX_DOMAIN {
                return Err(DataError::DomainOverflow {
                    attr: name.clone(),
                    max: MAX_DOMAIN,
                });
            }
            if *role == AttributeRole::Class {
                if let Some(first) = class_idx {
                    let (first_name, _, _) = &attrs[first];
                    return Err(DataError::MultipleClassAttributes(
                        first_name.clone(),
                        name.clone(),
                    ));
                }
                class_idx = Some(i);
            }
        }
        let class_idx = class_idx.ok_or(DataError::NoClassAttribute)?;
        Ok(AttributeSchema {
            attrs: attrs
                .into_iter()
                .map(|(name, role, domain)| Attribute { name, role, domain })
                .collect(),
            class_idx,
        })
    }

    pub fn attr_count(&self) -> usize {
        self.attrs.len()
    }

    pub fn attr(&self, index: usize) -> &Attribute {
        &self.attrs[index]
    }

    pub fn attrs(&self) -> &[Attribute] {
        &self.attrs
    }

    pub fn class_index(&self) -> usize {
        self.class_idx
    }

    pub fn class_attr(&self) -> &Attribute {
        &self.attrs[self.class_idx]
    }

    pub fn class_name(&self, class: ClassId) -> &str {
        self.class_attr().value(class.index() as u16)
    }

    pub fn class_id(&self, value: &str) -> Option<ClassId> {
        self.class_attr()
            .value_id(value)
            .filter(|&id| id < 2)
            .map(|id| ClassId::from_index(id as usize))
    }

    /// Indices of all non-class attributes, in schema order.
    pub fn non_class_indices(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.attrs.len()).filter(move |&i| i != self.class_idx)
    }

    pub fn is_invariant(&self, index: usize) -> bool {
        self.attrs[index].role == AttributeRole::Invariant
    }

    pub fn is_varying(&self, index: usize) -> bool {
        self.attrs[index].role == AttributeRole::Varying
    }

    pub fn has_varying(&self) -> bool {
        self.attrs.iter().any(|a| a.role == AttributeRole::Varying)
    }

    /// Renders the schema back into its file format, one `name:role` line
    /// per attribute.
    pub fn to_schema_text(&self) -> String {
        let mut out = String::new();
        for attr in &self.attrs {
            out.push_str(attr.name());
            out.push(':');
            out.push_str(attr.role().token());
            out.push('\n');
        }
        out
    }
}

/// Parses the schema file format: one `name:role` line per attribute, `#`
/// comments and blank lines allowed, order defines the attribute index.
pub fn load_schema(text: &str) -> Result<AttributeSchema, DataError> {
    let mut attrs = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = match raw.find('#') {
            Some(pos) => &raw[..pos],
            None => raw,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        let (name, role_token) = line.split_once(':').ok_or_else(|| DataError::BadSchemaLine {
            line: lineno + 1,
            text: raw.to_string(),
        })?;
        let name = name.trim();
        let role_token = role_token.trim();
        if name.is_empty() {
            return Err(DataError::BadSchemaLine {
                line: lineno + 1,
                text: raw.to_string(),
            });
        }
        let role = AttributeRole::parse(role_token).ok_or_else(|| DataError::UnknownRole {
            line: lineno + 1,
            role: role_token.to_string(),
        })?;
        attrs.push((name.to_string(), role));
    }
    AttributeSchema::new(attrs)
}

/// Immutable class-labeled categorical dataset.
///
/// Records are stored row-major as value ids; the class column sits at its
/// schema position like any other attribute.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dataset {
    schema: AttributeSchema,
    cells: Vec<u16>,
    n_rows: usize,
    class_counts: ClassCounts,
}

impl Dataset {
    pub fn schema(&self) -> &AttributeSchema {
        &self.schema
    }

    pub fn n_total(&self) -> u64 {
        self.n_rows as u64
    }

    /// Per-class record counts `(n1, n2)`.
    pub fn class_record_counts(&self) -> ClassCounts {
        self.class_counts
    }

    pub fn row(&self, index: usize) -> &[u16] {
        let stride = self.schema.attr_count();
        &self.cells[index * stride..(index + 1) * stride]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[u16]> + '_ {
        let stride = self.schema.attr_count();
        self.cells.chunks_exact(stride)
    }

    pub fn row_class(&self, index: usize) -> ClassId {
        ClassId::from_index(self.row(index)[self.schema.class_idx] as usize)
    }

    /// Builds a dataset from rows of value strings in schema column order.
    /// Domains are extended by first appearance, exactly like CSV loading.
    pub fn from_records(
        schema: AttributeSchema,
        rows: &[Vec<&str>],
    ) -> Result<Dataset, DataError> {
        let n_attrs = schema.attr_count();
        let mut builder = DatasetBuilder::new(schema);
        for (rowno, row) in rows.iter().enumerate() {
            if row.len() != n_attrs {
                return Err(DataError::BadFieldCount {
                    row: rowno + 1,
                    expected: n_attrs,
                    got: row.len(),
                });
            }
            builder.push_row(rowno + 1, |attr_idx| row[attr_idx])?;
        }
        builder.finish()
    }

    /// Builds a dataset from value-id rows against a schema whose domains are
    /// already declared. Every id must be valid for its attribute.
    pub fn from_value_rows(
        schema: AttributeSchema,
        rows: Vec<Vec<u16>>,
    ) -> Result<Dataset, DataError> {
        let n_attrs = schema.attr_count();
        if schema.class_attr().domain().len() != 2 {
            return Err(DataError::ClassCardinality {
                attr: schema.class_attr().name().to_string(),
                found: schema.class_attr().domain().len(),
            });
        }
        let mut cells = Vec::with_capacity(rows.len() * n_attrs);
        let mut class_counts = ClassCounts::ZERO;
        for (rowno, row) in rows.iter().enumerate() {
            if row.len() != n_attrs {
                return Err(DataError::BadFieldCount {
                    row: rowno + 1,
                    expected: n_attrs,
                    got: row.len(),
                });
            }
            for (attr_idx, &id) in row.iter().enumerate() {
                let attr = schema.attr(attr_idx);
                if id as usize >= attr.domain().len() {
                    return Err(DataError::BadValueId {
                        attr: attr.name().to_string(),
                        value: id,
                    });
                }
            }
            class_counts.bump(ClassId::from_index(row[schema.class_idx] as usize));
            cells.extend_from_slice(row);
        }
        Ok(Dataset {
            n_rows: rows.len(),
            schema,
            cells,
            class_counts,
        })
    }

    /// Writes the dataset as RFC-4180 CSV with a header in schema order.
    pub fn write_csv<W: io::Write>(&self, writer: W) -> Result<(), DataError> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(self.schema.attrs().iter().map(|a| a.name()))?;
        for row in self.rows() {
            w.write_record(
                row.iter()
                    .enumerate()
                    .map(|(attr_idx, &id)| self.schema.attr(attr_idx).value(id)),
            )?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("csv write to memory");
        String::from_utf8(buf).expect("csv output is utf-8")
    }
}

/// Loads a CSV stream against a schema. The header must contain exactly the
/// schema's attribute names, in any column order.
pub fn load_dataset<R: io::Read>(
    reader: R,
    schema: &AttributeSchema,
) -> Result<Dataset, DataError> {
    let mut csv_reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .from_reader(reader);

    let headers = csv_reader.headers()?.clone();
    let mut column_of_attr = vec![usize::MAX; schema.attr_count()];
    let mut claimed = vec![false; headers.len()];
    for (attr_idx, attr) in schema.attrs().iter().enumerate() {
        let mut found = None;
        for (col, name) in headers.iter().enumerate() {
            if name == attr.name() {
                if found.is_some() {
                    return Err(DataError::HeaderMismatch(format!(
                        "column `{}` appears more than once",
                        attr.name()
                    )));
                }
                found = Some(col);
            }
        }
        let col = found.ok_or_else(|| {
            DataError::HeaderMismatch(format!("schema attribute `{}` missing", attr.name()))
        })?;
        column_of_attr[attr_idx] = col;
        claimed[col] = true;
    }
    if let Some(extra) = claimed.iter().position(|&c| !c) {
        return Err(DataError::HeaderMismatch(format!(
            "unexpected column `{}`",
            &headers[extra]
        )));
    }

    let mut builder = DatasetBuilder::new(schema.clone());
    let mut record = csv::StringRecord::new();
    let mut rowno = 0usize;
    while csv_reader.read_record(&mut record)? {
        rowno += 1;
        if record.len() != headers.len() {
            return Err(DataError::BadFieldCount {
                row: rowno,
                expected: headers.len(),
                got: record.len(),
            });
        }
        builder.push_row(rowno, |attr_idx| &record[column_of_attr[attr_idx]])?;
    }
    builder.finish()
}

/// Incrementally interns rows, extending domains by first appearance.
struct DatasetBuilder {
    schema: AttributeSchema,
    value_ids: Vec<HashMap<String, u16>>,
    cells: Vec<u16>,
    n_rows: usize,
}

impl DatasetBuilder {
    fn new(schema: AttributeSchema) -> DatasetBuilder {
        let value_ids = schema
            .attrs()
            .iter()
            .map(|attr| {
                attr.domain()
                    .iter()
                    .enumerate()
                    .map(|(i, v)| (v.clone(), i as u16))
                    .collect()
            })
            .collect();
        DatasetBuilder {
            schema,
            value_ids,
            cells: Vec::new(),
            n_rows: 0,
        }
    }

    fn push_row<'a>(
        &mut self,
        rowno: usize,
        cell: impl Fn(usize) -> &'a str,
    ) -> Result<(), DataError> {
        for attr_idx in 0..self.schema.attr_count() {
            let raw = cell(attr_idx);
            if raw.is_empty() {
                return Err(DataError::MissingValue {
                    row: rowno,
                    column: self.schema.attr(attr_idx).name().to_string(),
                });
            }
            let id = match self.value_ids[attr_idx].get(raw) {
                Some(&id) => id,
                None => {
                    let attr = &mut self.schema.attrs[attr_idx];
                    if attr.domain.len() >= MAX_DOMAIN {
                        return Err(DataError::DomainOverflow {
                            attr: attr.name.clone(),
                            max: MAX_DOMAIN,
                        });
                    }
                    let id = attr.domain.len() as u16;
                    attr.domain.push(raw.to_string());
                    self.value_ids[attr_idx].insert(raw.to_string(), id);
                    id
                }
            };
            self.cells.push(id);
        }
        self.n_rows += 1;
        Ok(())
    }

    fn finish(self) -> Result<Dataset, DataError> {
        let class_attr = self.schema.class_attr();
        if class_attr.domain().len() != 2 {
            return Err(DataError::ClassCardinality {
                attr: class_attr.name().to_string(),
                found: class_attr.domain().len(),
            });
        }
        let class_idx = self.schema.class_index();
        let stride = self.schema.attr_count();
        let mut class_counts = ClassCounts::ZERO;
        for row in self.cells.chunks_exact(stride) {
            class_counts.bump(ClassId::from_index(row[class_idx] as usize));
        }
        Ok(Dataset {
            schema: self.schema,
            cells: self.cells,
            n_rows: self.n_rows,
            class_counts,
        })
    }
}
