//! Command implementations: each returns the process exit code and the
//! rendered output for stdout.

use std::time::Instant;

use gridctl_core::{
    brick_inheritance_scan, build_grid_laplacian, classify_symmetry, eigenspace_symmetry_profile,
    grid_spectrum, numeric_eigensystem, pbh_uncontrollable_with, simple_grid_controllable,
    spectrum_controllable, EigenBasis, GridSpec, GridSpectrum, GridVerdict, NodeIndex, Precision,
};

use crate::args::{self, AnalyzeArgs, Format, PartitionArgs, ScanArgs, SpectrumArgs, SuggestArgs};
use crate::error::CliError;
use crate::render;
use crate::report::{
    self, AnalyzeReport, ClassDto, EigenClassesDto, EigenvalueDto, GroupDto, MarkerDto, ModeDto,
    MultipleDto, NodeMarkersDto, OracleDto, PartitionReport, ScanEntryDto, ScanReport,
    SpectrumReport, SuggestReport, WitnessDto, SCHEMA,
};

/// Tolerance for matching structural eigenvalues against oracle values.
const ORACLE_MATCH_TOLERANCE: f64 = 1e-8;

/// Attempt cap for the non-simple control set search.
const SUGGEST_ATTEMPT_CAP: usize = 20_000;

fn parse_grid(dims: &str) -> Result<GridSpec, CliError> {
    let dims = args::parse_dims(dims).map_err(CliError::Usage)?;
    Ok(GridSpec::new(dims)?)
}

fn to_json<T: serde::Serialize>(report: &T) -> Result<String, CliError> {
    let body = serde_json::to_string_pretty(report)
        .map_err(|e| CliError::Internal(format!("report serialization failed: {e}")))?;
    Ok(body + "\n")
}

fn elapsed_ms(started: Instant) -> f64 {
    started.elapsed().as_secs_f64() * 1e3
}

/// Run the PBH oracle and compare it against the structural verdict: same
/// yes/no answer and the same uncontrollable eigenvalues.
fn oracle_cross_check(
    grid: &GridSpec,
    nodes: &[NodeIndex],
    verdict: &GridVerdict,
) -> Result<OracleDto, CliError> {
    let lap = build_grid_laplacian(grid)?;
    let spectrum = numeric_eigensystem(&lap)?;
    let rows: Vec<usize> = nodes.iter().map(|n| grid.flatten(n)).collect();
    let mut oracle_values: Vec<f64> =
        pbh_uncontrollable_with(&spectrum, &rows)?.into_iter().map(|(v, _)| v).collect();
    oracle_values.sort_by(|a, b| a.partial_cmp(b).unwrap());

    let mut structural: Vec<f64> =
        verdict.uncontrollable.iter().map(|m| m.value.value()).collect();
    structural.sort_by(|a, b| a.partial_cmp(b).unwrap());

    let agreement = verdict.controllable == oracle_values.is_empty()
        && structural.len() == oracle_values.len()
        && structural
            .iter()
            .zip(&oracle_values)
            .all(|(s, o)| (s - o).abs() <= ORACLE_MATCH_TOLERANCE);
    Ok(OracleDto { agreement, uncontrollable: oracle_values })
}

pub fn analyze(
    cmd: &'static str,
    args: &AnalyzeArgs,
    force_verify: bool,
    prec: &Precision,
) -> Result<(i32, String), CliError> {
    let started = Instant::now();
    let grid = parse_grid(&args.dims)?;
    let nodes = args::parse_nodes(&args.nodes, &grid).map_err(CliError::Usage)?;
    let spectrum = grid_spectrum(&grid, prec)?;
    let verdict = spectrum_controllable(&spectrum, &nodes, prec)?;
    let mu = spectrum.max_multiplicity();

    let reason = (!verdict.controllable && nodes.len() < mu).then(|| {
        format!(
            "multiplicity bound mu={mu}: {} node(s) cannot control a multiplicity-{mu} eigenvalue",
            nodes.len()
        )
    });
    let oracle = if args.verify || force_verify {
        Some(oracle_cross_check(&grid, &nodes, &verdict)?)
    } else {
        None
    };

    let adjective = args.mode.adjective();
    let report = AnalyzeReport {
        schema: SCHEMA,
        command: cmd,
        mode: args.mode.name(),
        dims: grid.dims().to_vec(),
        nodes: report::node_coords(&nodes),
        simple: spectrum.is_simple(),
        max_multiplicity: mu,
        min_control_set_size: mu,
        controllable: verdict.controllable,
        verdict: if verdict.controllable {
            adjective.to_string()
        } else {
            format!("not {adjective}")
        },
        reason,
        common_tuples: verdict.common_tuples.clone(),
        uncontrollable: verdict
            .uncontrollable
            .iter()
            .map(|m| ModeDto {
                eigenvalue: EigenvalueDto::new(&m.value),
                multiplicity: m.value.multiplicity,
                witness: args.witnesses.then(|| WitnessDto::new(&m.witness)),
            })
            .collect(),
        oracle,
        elapsed_ms: elapsed_ms(started),
    };

    let output = match args.format {
        Format::Json => to_json(&report)?,
        Format::Text => render::analyze_text(&report),
        Format::Svg | Format::Dot => {
            return Err(CliError::Usage("analyze supports text or json output".into()))
        }
    };

    if let Some(oracle) = &report.oracle {
        if !oracle.agreement {
            let dump = serde_json::json!({
                "structural": report.uncontrollable.iter()
                    .map(|m| m.eigenvalue.approx).collect::<Vec<_>>(),
                "oracle": oracle.uncontrollable,
                "controllable": report.controllable,
            });
            eprintln!("error: structural verdict disagrees with the oracle: {dump}");
            return Ok((2, output));
        }
    }
    Ok((if verdict.controllable { 0 } else { 3 }, output))
}

/// Group nodes by the direction of their eigenspace coordinate vector
/// `(v_1[x], ..., v_mu[x])` up to scale. Nodes in one class admit a
/// combination vanishing on all of them simultaneously; symbol 0 collects
/// nodes where the whole eigenspace vanishes.
fn eigenspace_classes(g: &GridSpec, eb: &EigenBasis) -> Vec<ClassDto> {
    let mut keyed: Vec<(Vec<i64>, Vec<Vec<usize>>)> = Vec::new();
    let mut zero_nodes: Vec<Vec<usize>> = Vec::new();
    for flat in 0..g.node_count() {
        let row: Vec<f64> = eb.vectors.iter().map(|v| v.vector[flat]).collect();
        let coords = g.unflatten(flat).coords().to_vec();
        let sup = row.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        if sup <= 1e-9 {
            zero_nodes.push(coords);
            continue;
        }
        let pivot = row
            .iter()
            .copied()
            .find(|x| x.abs() >= sup * (1.0 - 1e-9))
            .expect("sup-attaining component exists");
        let key: Vec<i64> = row.iter().map(|x| ((x / pivot) * 1e9).round() as i64).collect();
        match keyed.iter_mut().find(|(k, _)| *k == key) {
            Some((_, nodes)) => nodes.push(coords),
            None => keyed.push((key, vec![coords])),
        }
    }
    let mut classes = Vec::new();
    if !zero_nodes.is_empty() {
        classes.push(ClassDto { symbol: 0, nodes: zero_nodes });
    }
    classes.extend(
        keyed
            .into_iter()
            .enumerate()
            .map(|(i, (_, nodes))| ClassDto { symbol: i + 1, nodes }),
    );
    classes
}

pub fn partition(args: &PartitionArgs, prec: &Precision) -> Result<(i32, String), CliError> {
    let started = Instant::now();
    let grid = parse_grid(&args.dims)?;
    let spectrum = grid_spectrum(&grid, prec)?;
    let alphabet = report::alphabet_symbols(&grid)?;

    let nodes: Vec<NodeMarkersDto> = grid
        .nodes()
        .map(|node| {
            let markers = alphabet
                .iter()
                .filter(|sym| sym.coords.contains(&node.coord(sym.axis)))
                .map(|sym| MarkerDto { axis: sym.axis, q: sym.q })
                .collect();
            NodeMarkersDto { node: node.coords().to_vec(), markers }
        })
        .collect();

    let mut multiple = Vec::new();
    if !spectrum.is_simple() {
        let scan = brick_inheritance_scan(&grid, prec)?;
        let groups = spectrum.groups().iter().filter(|g| g.value.multiplicity >= 2);
        for (group, entry) in groups.zip(&scan.entries) {
            multiple.push(EigenClassesDto {
                eigenvalue: EigenvalueDto::new(&group.value),
                multiplicity: group.value.multiplicity,
                carrying_brick: entry.carrying_brick.clone(),
                inherited_from: entry.inherited_from.clone(),
                classes: eigenspace_classes(&grid, group),
            });
        }
    }

    let report = PartitionReport {
        schema: SCHEMA,
        command: "partition",
        mode: args.mode.name(),
        dims: grid.dims().to_vec(),
        alphabet,
        nodes,
        multiple,
        elapsed_ms: elapsed_ms(started),
    };

    let output = match args.format {
        Format::Json => to_json(&report)?,
        Format::Text => render::partition_text(&report),
        Format::Svg => render::partition_svg(&report)?,
        Format::Dot => render::partition_dot(&report),
    };
    Ok((0, output))
}

/// Locate the group of a brick's spectrum carrying the given eigenvalue.
fn brick_group<'s>(spectrum: &'s GridSpectrum, value: f64) -> Result<&'s EigenBasis, CliError> {
    spectrum
        .groups()
        .iter()
        .find(|g| (g.value.value() - value).abs() <= 1e-9)
        .ok_or_else(|| {
            CliError::Internal(format!(
                "carrying brick spectrum does not contain eigenvalue {value}"
            ))
        })
}

pub fn spectrum(args: &SpectrumArgs, prec: &Precision) -> Result<(i32, String), CliError> {
    let started = Instant::now();
    let grid = parse_grid(&args.dims)?;
    let spectrum = grid_spectrum(&grid, prec)?;

    let groups: Vec<GroupDto> = spectrum
        .groups()
        .iter()
        .map(|group| GroupDto {
            eigenvalue: EigenvalueDto::new(&group.value),
            multiplicity: group.value.multiplicity,
            tuples: group.vectors.iter().map(|v| v.indices.clone()).collect(),
            classes: group.vectors.iter().map(|v| classify_symmetry(v).to_string()).collect(),
        })
        .collect();

    let mut multiple = Vec::new();
    if !spectrum.is_simple() {
        let scan = brick_inheritance_scan(&grid, prec)?;
        let heavy = spectrum.groups().iter().filter(|g| g.value.multiplicity >= 2);
        for (group, entry) in heavy.zip(&scan.entries) {
            // Classes are reported for the carrying brick's own eigenbasis:
            // the grid eigenspace is its mirrored tiling.
            let brick = GridSpec::new(entry.carrying_brick.clone())?;
            let brick_spectrum;
            let brick_basis = if brick.dims() == grid.dims() {
                group
            } else {
                brick_spectrum = grid_spectrum(&brick, prec)?;
                brick_group(&brick_spectrum, group.value.value())?
            };
            let profile = eigenspace_symmetry_profile(brick_basis);
            multiple.push(MultipleDto {
                eigenvalue: EigenvalueDto::new(&group.value),
                multiplicity: group.value.multiplicity,
                carrying_brick: entry.carrying_brick.clone(),
                inherited_from: entry.inherited_from.clone(),
                brick_classes: profile.classes.iter().map(|c| c.to_string()).collect(),
                rule: profile.rule.map(|r| r.label()),
                violation: entry.violation,
            });
        }
    }

    let report = SpectrumReport {
        schema: SCHEMA,
        command: "spectrum",
        dims: grid.dims().to_vec(),
        node_count: grid.node_count(),
        distinct_eigenvalues: spectrum.groups().len(),
        simple: spectrum.is_simple(),
        max_multiplicity: spectrum.max_multiplicity(),
        min_control_set_size: spectrum.max_multiplicity(),
        groups,
        multiple,
        elapsed_ms: elapsed_ms(started),
    };

    let output = match args.format {
        Format::Json => to_json(&report)?,
        Format::Text => render::spectrum_text(&report),
        Format::Svg | Format::Dot => {
            return Err(CliError::Usage("spectrum supports text or json output".into()))
        }
    };
    Ok((0, output))
}

/// Advance `c` to the next size-`k` combination of `0..n` in lexicographic
/// order; false when exhausted.
fn next_combination(c: &mut [usize], n: usize) -> bool {
    let k = c.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if c[i] < n - (k - i) {
            c[i] += 1;
            for j in i + 1..k {
                c[j] = c[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

pub fn suggest(args: &SuggestArgs, prec: &Precision) -> Result<(i32, String), CliError> {
    let started = Instant::now();
    let grid = parse_grid(&args.dims)?;
    let spectrum = grid_spectrum(&grid, prec)?;
    let mu = spectrum.max_multiplicity();

    let (nodes, justification) = if spectrum.is_simple() {
        let corner = NodeIndex::new(vec![1; grid.ndim()]);
        let verdict = simple_grid_controllable(&grid, std::slice::from_ref(&corner), prec)?;
        debug_assert!(verdict.controllable);
        (
            vec![corner],
            "corner node: 2*1-1 = 1 shares no odd prime power with any axis length, \
             so no eigenvector vanishes there"
                .to_string(),
        )
    } else {
        search_control_set(&grid, &spectrum, mu, prec)?
    };

    let report = SuggestReport {
        schema: SCHEMA,
        command: "suggest",
        mode: args.mode.name(),
        dims: grid.dims().to_vec(),
        nodes: report::node_coords(&nodes),
        size: nodes.len(),
        justification,
        elapsed_ms: elapsed_ms(started),
    };
    let output = match args.format {
        Format::Json => to_json(&report)?,
        Format::Text => render::suggest_text(&report),
        Format::Svg | Format::Dot => {
            return Err(CliError::Usage("suggest supports text or json output".into()))
        }
    };
    Ok((0, output))
}

/// Smallest controllable node set on a non-simple grid: lexicographic
/// search over combinations of size mu*, then mu*+1, capped.
fn search_control_set(
    grid: &GridSpec,
    spectrum: &GridSpectrum,
    mu: usize,
    prec: &Precision,
) -> Result<(Vec<NodeIndex>, String), CliError> {
    let all: Vec<NodeIndex> = grid.nodes().collect();
    let mut attempts = 0usize;
    for size in mu..=(mu + 1).min(all.len()) {
        let mut combo: Vec<usize> = (0..size).collect();
        loop {
            let set: Vec<NodeIndex> = combo.iter().map(|&i| all[i].clone()).collect();
            if spectrum_controllable(spectrum, &set, prec)?.controllable {
                let justification = format!(
                    "first set of size {size} (lexicographic order) passing the eigenspace \
                     rank test for every eigenvalue; no set smaller than mu*={mu} can work"
                );
                return Ok((set, justification));
            }
            attempts += 1;
            if attempts >= SUGGEST_ATTEMPT_CAP {
                return Err(CliError::Internal(format!(
                    "no controllable set found within {SUGGEST_ATTEMPT_CAP} attempts"
                )));
            }
            if !next_combination(&mut combo, all.len()) {
                break;
            }
        }
    }
    Err(CliError::Internal(format!(
        "no controllable set of size {mu} or {} exists",
        mu + 1
    )))
}

pub fn scan_conjecture(args: &ScanArgs, prec: &Precision) -> Result<(i32, String), CliError> {
    let started = Instant::now();
    let max_dims = args::parse_dims(&args.max_dims).map_err(CliError::Usage)?;
    if max_dims.iter().any(|&n| n < 2) {
        return Err(CliError::Usage("every scan bound must be at least 2".into()));
    }

    let mut entries = Vec::new();
    let mut grids_scanned = 0usize;
    let mut violations = 0usize;
    let mut dims = vec![2usize; max_dims.len()];
    loop {
        let grid = GridSpec::new(dims.clone())?;
        let scan = brick_inheritance_scan(&grid, prec)?;
        grids_scanned += 1;
        violations += scan.violations;
        for entry in &scan.entries {
            entries.push(ScanEntryDto {
                dims: dims.clone(),
                eigenvalue: EigenvalueDto::new(&entry.value),
                multiplicity: entry.value.multiplicity,
                carrying_brick: entry.carrying_brick.clone(),
                inherited_from: entry.inherited_from.clone(),
                violation: entry.violation,
            });
        }
        // Odometer over 2..=max_dims[l].
        let mut advanced = false;
        for axis in (0..dims.len()).rev() {
            if dims[axis] < max_dims[axis] {
                dims[axis] += 1;
                for d in dims.iter_mut().skip(axis + 1) {
                    *d = 2;
                }
                advanced = true;
                break;
            }
        }
        if !advanced {
            break;
        }
    }

    let multiple_eigenvalues = entries.len();
    let report = ScanReport {
        schema: SCHEMA,
        command: "scan-conjecture",
        max_dims,
        grids_scanned,
        multiple_eigenvalues,
        violations,
        entries,
        elapsed_ms: elapsed_ms(started),
    };
    let output = match args.format {
        Format::Json => to_json(&report)?,
        Format::Text => render::scan_text(&report),
        Format::Svg | Format::Dot => {
            return Err(CliError::Usage("scan-conjecture supports text or json output".into()))
        }
    };
    if violations > 0 {
        eprintln!(
            "error: {violations} multiple eigenvalue(s) not carried by any proper sub-brick"
        );
        return Ok((2, output));
    }
    Ok((0, output))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn combinations_enumerate_lexicographically() {
        let mut c = vec![0, 1];
        let mut seen = vec![c.clone()];
        while next_combination(&mut c, 4) {
            seen.push(c.clone());
        }
        assert_eq!(seen, vec![
            vec![0, 1], vec![0, 2], vec![0, 3],
            vec![1, 2], vec![1, 3], vec![2, 3],
        ]);
    }

    #[test]
    fn classes_on_2x2_pair_antipodal_nodes() {
        let p = Precision::default();
        let g = GridSpec::new(vec![2, 2]).unwrap();
        let s = grid_spectrum(&g, &p).unwrap();
        let group = s.groups().iter().find(|gr| gr.value.multiplicity == 2).unwrap();
        let classes = eigenspace_classes(&g, group);
        assert_eq!(classes.len(), 2);
        let find = |coords: &[usize]| {
            classes
                .iter()
                .position(|c| c.nodes.iter().any(|n| n == coords))
                .unwrap()
        };
        assert_eq!(find(&[1, 1]), find(&[2, 2]));
        assert_eq!(find(&[1, 2]), find(&[2, 1]));
        assert_ne!(find(&[1, 1]), find(&[1, 2]));
    }
}
