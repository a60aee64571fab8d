use std::collections::HashMap;

use crate::labels::LabelSpace;
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Category {
    pub code: String,
    pub name: String,
    pub multidisciplinary: bool,
    /// Journal-era disciplines of this category (indices into the taxonomy's
    /// discipline list), one to three entries.
    pub disciplines: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Discipline {
    pub code: String,
    /// Index into [`Taxonomy::domains`].
    pub domain: usize,
}

/// Category registry with the journal-era category → discipline → domain map.
#[derive(Clone, Debug)]
pub struct Taxonomy {
    categories: Vec<Category>,
    category_index: HashMap<String, usize>,
    disciplines: Vec<Discipline>,
    discipline_index: HashMap<String, usize>,
    domains: Vec<String>,
}

/// Description of a category used to build a [`Taxonomy`].
#[derive(Clone, Debug)]
pub struct CategorySpec {
    pub code: String,
    pub name: String,
    pub multidisciplinary: bool,
    pub disciplines: Vec<String>,
}

impl Taxonomy {
    /// `disciplines` maps discipline code → domain code.
    pub fn new(categories: Vec<CategorySpec>, disciplines: Vec<(String, String)>) -> Result<Self> {
        let mut disciplines = disciplines;
        disciplines.sort();
        let mut domains: Vec<String> = disciplines.iter().map(|d| d.1.clone()).collect();
        domains.sort();
        domains.dedup();

        let mut discipline_index = HashMap::new();
        let mut discipline_list = Vec::with_capacity(disciplines.len());
        for (code, domain) in disciplines {
            if discipline_index.contains_key(&code) {
                return Err(Error::Invalid(format!("discipline `{code}` listed twice")));
            }
            let domain = domains.binary_search(&domain).expect("domain collected above");
            discipline_index.insert(code.clone(), discipline_list.len());
            discipline_list.push(Discipline { code, domain });
        }

        let mut categories = categories;
        categories.sort_by(|a, b| a.code.cmp(&b.code));
        let mut category_index = HashMap::new();
        let mut category_list = Vec::with_capacity(categories.len());
        for spec in categories {
            if category_index.contains_key(&spec.code) {
                return Err(Error::Invalid(format!("category `{}` listed twice", spec.code)));
            }
            if spec.disciplines.is_empty() || spec.disciplines.len() > 3 {
                return Err(Error::Invalid(format!(
                    "category `{}` must map to 1-3 disciplines, found {}",
                    spec.code,
                    spec.disciplines.len()
                )));
            }
            let mut discs = Vec::with_capacity(spec.disciplines.len());
            for d in &spec.disciplines {
                let idx = *discipline_index.get(d).ok_or_else(|| {
                    Error::Invalid(format!("category `{}` maps to unknown discipline `{d}`", spec.code))
                })?;
                if discs.contains(&idx) {
                    return Err(Error::Invalid(format!(
                        "category `{}` lists discipline `{d}` twice",
                        spec.code
                    )));
                }
                discs.push(idx);
            }
            category_index.insert(spec.code.clone(), category_list.len());
            category_list.push(Category {
                code: spec.code,
                name: spec.name,
                multidisciplinary: spec.multidisciplinary,
                disciplines: discs,
            });
        }

        Ok(Self {
            categories: category_list,
            category_index,
            disciplines: discipline_list,
            discipline_index,
            domains,
        })
    }

    pub fn categories(&self) -> &[Category] {
        &self.categories
    }

    pub fn category(&self, index: usize) -> &Category {
        &self.categories[index]
    }

    pub fn category_index(&self, code: &str) -> Option<usize> {
        self.category_index.get(code).copied()
    }

    pub fn disciplines(&self) -> &[Discipline] {
        &self.disciplines
    }

    pub fn discipline(&self, index: usize) -> &Discipline {
        &self.disciplines[index]
    }

    pub fn discipline_index(&self, code: &str) -> Option<usize> {
        self.discipline_index.get(code).copied()
    }

    pub fn domains(&self) -> &[String] {
        &self.domains
    }

    pub fn domain_of(&self, discipline: usize) -> usize {
        self.disciplines[discipline].domain
    }

    pub fn multidisciplinary_codes(&self) -> impl Iterator<Item = &str> {
        self.categories
            .iter()
            .filter(|c| c.multidisciplinary)
            .map(|c| c.code.as_str())
    }

    /// Category label space; multidisciplinary categories are excluded labels.
    pub fn category_labels(&self) -> LabelSpace {
        LabelSpace::new(self.categories.iter().map(|c| (c.code.clone(), c.multidisciplinary)))
            .expect("category codes are unique")
    }

    /// Discipline label space; no discipline is excluded.
    pub fn discipline_labels(&self) -> LabelSpace {
        LabelSpace::new(self.disciplines.iter().map(|d| (d.code.clone(), false)))
            .expect("discipline codes are unique")
    }
}
