//! Where the objects of a job come from: an input file or a catalog entry.

use std::path::Path;

use lnd_core::catalog::{self, CatalogEntry, Params, Payload};
use lnd_core::dmodule::{omega, sym_extend};
use lnd_core::kuroda::ExponentData;
use lnd_core::{parse_document, DeltaModule, Derivation, Document};
use serde_json::{json, Value};

use crate::CliError;

pub enum Loaded {
    Entry(CatalogEntry),
    Doc(Document),
}

pub struct Source {
    pub loaded: Loaded,
    pub json: Value,
    pub derivation: Option<String>,
    /// `None`: not requested; `Some(None)`: the only module.
    pub module: Option<Option<String>>,
    pub other: Option<String>,
}

pub fn parse_param(text: &str) -> Result<(String, i64), CliError> {
    let (k, v) =
        text.split_once('=').ok_or_else(|| CliError::Usage(format!("--param expects key=value, got `{text}`")))?;
    let v: i64 = v.trim().parse().map_err(|_| CliError::Usage(format!("--param {k}: `{v}` is not an integer")))?;
    Ok((k.trim().to_string(), v))
}

pub fn load(input: Option<&Path>, example: Option<&str>, params: &[String]) -> Result<(Loaded, Value), CliError> {
    match (input, example) {
        (Some(_), Some(_)) => Err(CliError::Usage("give either --input or --example, not both".into())),
        (None, None) => Err(CliError::Usage("no input: give --input FILE or --example ID".into())),
        (Some(path), None) => {
            if !params.is_empty() {
                return Err(CliError::Usage("--param only applies to --example".into()));
            }
            let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
            let doc = parse_document(&text)?;
            Ok((Loaded::Doc(doc), json!({ "input": path.display().to_string() })))
        }
        (None, Some(id)) => {
            let mut p = Params::new();
            for text in params {
                let (k, v) = parse_param(text)?;
                if p.insert(k.clone(), v).is_some() {
                    return Err(CliError::Usage(format!("--param {k} given twice")));
                }
            }
            let entry = catalog::get(id, &p)?;
            let json = json!({ "example": id, "params": entry.params });
            Ok((Loaded::Entry(entry), json))
        }
    }
}

impl Source {
    pub fn derivation(&self) -> Result<Derivation, CliError> {
        match &self.loaded {
            Loaded::Entry(e) => e
                .derivation()
                .cloned()
                .ok_or_else(|| CliError::Usage(format!("example `{}` provides exponent data, not a derivation", e.id))),
            Loaded::Doc(doc) => {
                if self.derivation.is_none() {
                    if let Some(Some(name)) = &self.module {
                        return Ok(doc.module(Some(name))?.base().clone());
                    }
                }
                Ok(doc.derivation(self.derivation.as_deref())?.clone())
            }
        }
    }

    /// The selected module, or the differentials of the derivation when `use_omega` is set.
    pub fn module(&self, use_omega: bool) -> Result<DeltaModule, CliError> {
        if use_omega {
            return Ok(omega(&self.derivation()?));
        }
        match &self.loaded {
            Loaded::Entry(e) => e.module().cloned().ok_or_else(|| {
                CliError::Usage(format!("example `{}` is not a module; use --omega for its differentials", e.id))
            }),
            Loaded::Doc(doc) => {
                let name = self.module.clone().flatten();
                Ok(doc.module(name.as_deref())?.clone())
            }
        }
    }

    /// Second operand for `tensor`/`hom`; the first one again unless `--other` names a module.
    pub fn other_module(&self, first: &DeltaModule) -> Result<DeltaModule, CliError> {
        match (&self.loaded, &self.other) {
            (_, None) => Ok(first.clone()),
            (Loaded::Doc(doc), Some(name)) => Ok(doc.module(Some(name))?.clone()),
            (Loaded::Entry(_), Some(_)) => Err(CliError::Usage("--other needs --input".into())),
        }
    }

    /// Kuroda exponent data: given directly, read off a monomial derivation, or
    /// read off the symmetric extension of a module.
    pub fn exponents(&self) -> Result<ExponentData, CliError> {
        if let Loaded::Entry(e) = &self.loaded {
            match &e.payload {
                Payload::Exponents(x) => return Ok(x.clone()),
                Payload::Module(m) => return Ok(ExponentData::from_derivation(&sym_extend(m)?)?),
                Payload::Derivation(_) => {}
            }
        }
        if let Loaded::Doc(doc) = &self.loaded {
            if self.module.is_some() || (doc.derivations.is_empty() && doc.modules.len() == 1) {
                let m = self.module(false)?;
                return Ok(ExponentData::from_derivation(&sym_extend(&m)?)?);
            }
        }
        Ok(ExponentData::from_derivation(&self.derivation()?)?)
    }

    pub fn wants_module(&self) -> bool {
        self.module.is_some()
    }
}
