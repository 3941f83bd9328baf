use conflict_triad::PhaseLabel;

/// One-line `key=value` phase report. Keys appear in the order
/// `phase period limit collapse_step`, each only when it applies.
pub fn format_report(label: &PhaseLabel) -> String {
    let mut tokens = vec![format!("phase={}", label.name())];
    match label {
        PhaseLabel::FixedPoint { limit, .. } => {
            let coords: Vec<String> = limit.flat().map(|v| v.to_string()).collect();
            tokens.push(format!("limit={}", coords.join(",")));
        }
        PhaseLabel::Cycle { period, .. } => tokens.push(format!("period={period}")),
        PhaseLabel::WaveOfCycles { periods } => {
            let p: Vec<String> = periods.iter().map(|p| p.to_string()).collect();
            tokens.push(format!("period={}", p.join(",")));
        }
        PhaseLabel::QuasiChaotic => {}
        PhaseLabel::Collapse { step } => tokens.push(format!("collapse_step={step}")),
    }
    tokens.join(" ")
}
