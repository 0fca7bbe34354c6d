//! Ambient environmental sensors: pressure, contact, and passive infrared.
//!
//! Events serialize to JSON-lines `{"t":..., "id":..., "kind":..., "value":...}`,
//! the central-database record format.

use serde::{Deserialize, Serialize};

use crate::world::map::{SensorKind, SensorLocation};
use crate::world::WorldState;
use crate::Real;

/// Agent movement below this distance does not trigger a PIR, meters.
pub const MOTION_EPSILON: Real = 1e-4;

/// One timestamped sensor reading.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SensorEvent {
    /// World clock at emission, seconds.
    pub t: Real,
    pub id: String,
    pub kind: SensorKind,
    /// Pressure: occupied; Contact: open; PIR: motion.
    pub value: bool,
}

/// Sample every placed sensor against the current world state.
///
/// Pressure fires iff an agent stands (or lies) on the sensor cell; PIR fires
/// iff any agent moved at least [`MOTION_EPSILON`] inside its zone during the
/// last step; contact fires iff a scripted open/close action occurred during
/// the last step.
pub fn sample_environment_sensors(state: &WorldState) -> Vec<SensorEvent> {
    let mut events = Vec::new();
    let map = &state.map;
    for sensor in &map.sensor_placements {
        match sensor.kind {
            SensorKind::Pressure => {
                if let SensorLocation::Cell(cell) = &sensor.location {
                    let occupied = state
                        .agents
                        .iter()
                        .any(|a| map.cell_of(a.position) == Some(*cell));
                    if occupied {
                        events.push(SensorEvent {
                            t: state.clock,
                            id: sensor.id.clone(),
                            kind: SensorKind::Pressure,
                            value: true,
                        });
                    }
                }
            }
            SensorKind::Pir => {
                if let SensorLocation::Zone(room_name) = &sensor.location {
                    if let Some(room) = map.room(room_name) {
                        let motion = state.agents.iter().any(|a| {
                            a.moved_last_step >= MOTION_EPSILON
                                && map
                                    .cell_of(a.position)
                                    .map(|c| room.rect.contains(c))
                                    .unwrap_or(false)
                        });
                        if motion {
                            events.push(SensorEvent {
                                t: state.clock,
                                id: sensor.id.clone(),
                                kind: SensorKind::Pir,
                                value: true,
                            });
                        }
                    }
                }
            }
            SensorKind::Contact => {
                for change in &state.contact_changes {
                    if change.sensor_id == sensor.id {
                        events.push(SensorEvent {
                            t: state.clock,
                            id: sensor.id.clone(),
                            kind: SensorKind::Contact,
                            value: change.open,
                        });
                    }
                }
            }
        }
    }
    events
}
