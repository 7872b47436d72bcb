use std::path::Path;

use anyhow::{bail, Context, Result};
use qcomm_core::{catalog_entry, ket_io, Ket};

/// Where a state came from, for report headers.
pub struct LoadedState {
    pub label: String,
    pub state: Ket,
}

/// Resolves `--state`: a `.ket` file, a `.json` file, or a catalog name.
pub fn load_state(state_arg: &str) -> Result<LoadedState> {
    let path = Path::new(state_arg);
    let ext = path.extension().and_then(|e| e.to_str()).map(str::to_ascii_lowercase);
    match ext.as_deref() {
        Some("ket") => {
            let text = read(path)?;
            let state = ket_io::parse_ket(&text).with_context(|| format!("cannot parse {state_arg}"))?;
            Ok(LoadedState {
                label: state_arg.to_string(),
                state,
            })
        }
        Some("json") => {
            let text = read(path)?;
            let state = ket_io::from_json(&text).with_context(|| format!("cannot load {state_arg}"))?;
            Ok(LoadedState {
                label: state_arg.to_string(),
                state,
            })
        }
        _ => match catalog_entry(state_arg) {
            Ok(entry) => Ok(LoadedState {
                label: entry.name,
                state: entry.state,
            }),
            Err(_) => bail!("unknown state '{state_arg}'; run `qcomm states list` or pass a .ket or .json file"),
        },
    }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

/// Parses `1,3` (commas and/or spaces) into sorted, distinct labels.
pub fn parse_labels(text: &str) -> Result<Vec<usize>> {
    let mut labels = Vec::new();
    for part in text.split([',', ' ']).filter(|p| !p.is_empty()) {
        let label: usize = part
            .parse()
            .with_context(|| format!("bad qubit label '{part}' in '{text}'; expected e.g. 1,3"))?;
        labels.push(label);
    }
    if labels.is_empty() {
        bail!("empty qubit label list; expected e.g. 1,3");
    }
    labels.sort_unstable();
    let before = labels.len();
    labels.dedup();
    if labels.len() != before {
        bail!("qubit labels in '{text}' repeat");
    }
    Ok(labels)
}

pub fn check_labels(labels: &[usize], state: &Ket) -> Result<()> {
    let n = state.n_qubits();
    if let Some(&bad) = labels.iter().find(|&&l| l == 0 || l > n) {
        bail!("qubit label {bad} is out of range; the state has qubits 1..={n}");
    }
    Ok(())
}
