//! Maps raw diary codes to categories and discretizes one day onto the grid.

use activity_trajectories::*;

fn main() -> Result<()> {
    let mapping = CategoryMapping::default_atus();
    let grid = TimeGrid::default();
    let raw = [
        (0, 420, "01"),
        (420, 480, "11"),
        (480, 1020, "05"),
        (1020, 1100, "02"),
        (1100, 1320, "12"),
        (1320, 1440, "01"),
    ];
    let events = raw
        .iter()
        .map(|&(s, e, code)| DiaryEvent::new(s, e, map_raw_activity(code, &mapping)?))
        .collect::<Result<Vec<_>>>()?;
    let seq = diary_to_sequence("person-1", "Bronx", &events, &grid)?;
    for event in seq.to_events(&grid) {
        println!("{:>4}..{:<4} {} ({})", event.start, event.end, event.category, event.category.label());
    }
    Ok(())
}
