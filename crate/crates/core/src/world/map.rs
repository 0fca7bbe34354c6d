//! Apartment occupancy map: grid, rooms, doors, and sensor placements.
//!
//! Maps load from a JSON description with keys `grid`, `rooms`, `doors`,
//! `sensors`. The bundled `maps/apartment_3x3.json` is the canonical fixture:
//! a 3m x 3m four-room layout (bathroom, bedroom, hallway, kitchen) carrying
//! eleven sensors (four pressure, three contact, four passive infrared).

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geom::Vec2;
use crate::Real;

/// Grid cell address `(x, y)`; `y` grows upward.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(from = "[usize; 2]", into = "[usize; 2]")]
pub struct Cell {
    pub x: usize,
    pub y: usize,
}

impl Cell {
    pub fn new(x: usize, y: usize) -> Self {
        Cell { x, y }
    }
}

impl From<[usize; 2]> for Cell {
    fn from(a: [usize; 2]) -> Self {
        Cell::new(a[0], a[1])
    }
}

impl From<Cell> for [usize; 2] {
    fn from(c: Cell) -> Self {
        [c.x, c.y]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Occupancy {
    Free,
    Wall,
}

/// Ambient sensor kind.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SensorKind {
    Pressure,
    Contact,
    Pir,
}

/// Where a sensor watches: a single cell or a whole room zone.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SensorLocation {
    Cell(Cell),
    Zone(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct SensorPlacement {
    pub id: String,
    pub kind: SensorKind,
    pub location: SensorLocation,
}

/// Axis-aligned inclusive cell rectangle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(from = "[usize; 4]", into = "[usize; 4]")]
pub struct CellRect {
    pub x0: usize,
    pub y0: usize,
    pub x1: usize,
    pub y1: usize,
}

impl CellRect {
    pub fn contains(&self, c: Cell) -> bool {
        c.x >= self.x0 && c.x <= self.x1 && c.y >= self.y0 && c.y <= self.y1
    }
}

impl From<[usize; 4]> for CellRect {
    fn from(a: [usize; 4]) -> Self {
        CellRect { x0: a[0], y0: a[1], x1: a[2], y1: a[3] }
    }
}

impl From<CellRect> for [usize; 4] {
    fn from(r: CellRect) -> Self {
        [r.x0, r.y0, r.x1, r.y1]
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Room {
    pub name: String,
    pub rect: CellRect,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Door {
    pub cell: Cell,
    pub links: (String, String),
}

/// Occupancy grid plus rooms, doors, and sensor placements.
#[derive(Debug, Clone, PartialEq)]
pub struct HomeMap {
    pub width: usize,
    pub height: usize,
    /// Cell edge length in meters.
    pub cell_size: Real,
    occupancy: Vec<Occupancy>,
    pub rooms: Vec<Room>,
    pub doors: Vec<Door>,
    pub sensor_placements: Vec<SensorPlacement>,
}

#[derive(Debug, Error, PartialEq)]
pub enum MapError {
    #[error("map description does not parse: {0}")]
    Parse(String),
    #[error("grid dimensions must be positive")]
    BadDimensions,
    #[error("grid row {row} has {got} cells, expected {want}")]
    RowLength { row: usize, got: usize, want: usize },
    #[error("grid row {row} contains unknown cell character {ch:?}")]
    BadCellChar { row: usize, ch: char },
    #[error("room {name:?} extends outside the grid bounds")]
    RoomOutOfBounds { name: String },
    #[error("room {name:?} has no free cell")]
    EmptyRoom { name: String },
    #[error("door at ({x}, {y}) is not on a free cell")]
    DoorNotFree { x: usize, y: usize },
    #[error("door at ({x}, {y}) links unknown room {room:?}")]
    DoorUnknownRoom { x: usize, y: usize, room: String },
    #[error("duplicate sensor id {id:?}")]
    DuplicateSensorId { id: String },
    #[error("sensor {id:?} is placed on a wall cell ({x}, {y})")]
    SensorOnWall { id: String, x: usize, y: usize },
    #[error("sensor {id:?} is placed outside the grid")]
    SensorOutOfBounds { id: String },
    #[error("sensor {id:?} references unknown room {room:?}")]
    SensorUnknownRoom { id: String, room: String },
    #[error("sensor {id:?} needs exactly one of \"cell\" or \"zone\"")]
    SensorLocationMissing { id: String },
}

#[derive(Deserialize)]
struct MapDoc {
    grid: GridDoc,
    #[serde(default)]
    rooms: Vec<RoomDoc>,
    #[serde(default)]
    doors: Vec<DoorDoc>,
    #[serde(default)]
    sensors: Vec<SensorDoc>,
}

#[derive(Deserialize)]
struct GridDoc {
    width: usize,
    height: usize,
    #[serde(default = "default_cell_size")]
    cell_size_m: Real,
    /// Rows listed top first: `rows[0]` is y = height-1. `#` wall, `.` free.
    rows: Vec<String>,
}

fn default_cell_size() -> Real {
    0.1
}

#[derive(Deserialize)]
struct RoomDoc {
    name: String,
    rect: [usize; 4],
}

#[derive(Deserialize)]
struct DoorDoc {
    cell: [usize; 2],
    links: [String; 2],
}

#[derive(Deserialize)]
struct SensorDoc {
    id: String,
    kind: SensorKind,
    #[serde(default)]
    cell: Option<[usize; 2]>,
    #[serde(default)]
    zone: Option<String>,
}

/// Parse and validate a JSON map description.
pub fn load_map(description: &str) -> Result<HomeMap, MapError> {
    let doc: MapDoc = serde_json::from_str(description).map_err(|e| MapError::Parse(e.to_string()))?;
    let g = &doc.grid;
    if g.width == 0 || g.height == 0 {
        return Err(MapError::BadDimensions);
    }
    if g.rows.len() != g.height {
        return Err(MapError::RowLength { row: g.rows.len(), got: g.rows.len(), want: g.height });
    }
    let mut occupancy = vec![Occupancy::Free; g.width * g.height];
    for (i, row) in g.rows.iter().enumerate() {
        let y = g.height - 1 - i;
        let chars: Vec<char> = row.chars().collect();
        if chars.len() != g.width {
            return Err(MapError::RowLength { row: i, got: chars.len(), want: g.width });
        }
        for (x, &ch) in chars.iter().enumerate() {
            occupancy[y * g.width + x] = match ch {
                '#' => Occupancy::Wall,
                '.' => Occupancy::Free,
                _ => return Err(MapError::BadCellChar { row: i, ch }),
            };
        }
    }

    let rooms: Vec<Room> = doc
        .rooms
        .iter()
        .map(|r| Room { name: r.name.clone(), rect: CellRect::from(r.rect) })
        .collect();
    let doors: Vec<Door> = doc
        .doors
        .iter()
        .map(|d| Door {
            cell: Cell::from(d.cell),
            links: (d.links[0].clone(), d.links[1].clone()),
        })
        .collect();

    let mut sensors = Vec::new();
    for s in &doc.sensors {
        let location = match (&s.cell, &s.zone) {
            (Some(c), None) => SensorLocation::Cell(Cell::from(*c)),
            (None, Some(z)) => SensorLocation::Zone(z.clone()),
            _ => return Err(MapError::SensorLocationMissing { id: s.id.clone() }),
        };
        sensors.push(SensorPlacement { id: s.id.clone(), kind: s.kind, location });
    }

    let map = HomeMap {
        width: g.width,
        height: g.height,
        cell_size: g.cell_size_m,
        occupancy,
        rooms,
        doors,
        sensor_placements: sensors,
    };
    map.validate()?;
    Ok(map)
}

impl HomeMap {
    /// The bundled 3m x 3m four-room apartment with eleven sensors.
    pub fn bundled_apartment() -> HomeMap {
        load_map(include_str!("../../../../maps/apartment_3x3.json"))
            .expect("bundled map is valid")
    }

    fn validate(&self) -> Result<(), MapError> {
        for room in &self.rooms {
            let r = room.rect;
            if r.x1 >= self.width || r.y1 >= self.height || r.x0 > r.x1 || r.y0 > r.y1 {
                return Err(MapError::RoomOutOfBounds { name: room.name.clone() });
            }
            let mut any_free = false;
            'scan: for y in r.y0..=r.y1 {
                for x in r.x0..=r.x1 {
                    if self.occupancy(Cell::new(x, y)) == Occupancy::Free {
                        any_free = true;
                        break 'scan;
                    }
                }
            }
            if !any_free {
                return Err(MapError::EmptyRoom { name: room.name.clone() });
            }
        }
        for door in &self.doors {
            if !self.in_bounds(door.cell) || self.occupancy(door.cell) != Occupancy::Free {
                return Err(MapError::DoorNotFree { x: door.cell.x, y: door.cell.y });
            }
            for room in [&door.links.0, &door.links.1] {
                if self.room(room).is_none() {
                    return Err(MapError::DoorUnknownRoom {
                        x: door.cell.x,
                        y: door.cell.y,
                        room: room.clone(),
                    });
                }
            }
        }
        let mut seen = std::collections::BTreeSet::new();
        for s in &self.sensor_placements {
            if !seen.insert(s.id.clone()) {
                return Err(MapError::DuplicateSensorId { id: s.id.clone() });
            }
            match &s.location {
                SensorLocation::Cell(c) => {
                    if !self.in_bounds(*c) {
                        return Err(MapError::SensorOutOfBounds { id: s.id.clone() });
                    }
                    if self.occupancy(*c) == Occupancy::Wall {
                        return Err(MapError::SensorOnWall { id: s.id.clone(), x: c.x, y: c.y });
                    }
                }
                SensorLocation::Zone(z) => {
                    if self.room(z).is_none() {
                        return Err(MapError::SensorUnknownRoom { id: s.id.clone(), room: z.clone() });
                    }
                }
            }
        }
        Ok(())
    }

    pub fn in_bounds(&self, c: Cell) -> bool {
        c.x < self.width && c.y < self.height
    }

    pub fn occupancy(&self, c: Cell) -> Occupancy {
        self.occupancy[c.y * self.width + c.x]
    }

    pub fn is_free(&self, c: Cell) -> bool {
        self.in_bounds(c) && self.occupancy(c) == Occupancy::Free
    }

    pub fn room(&self, name: &str) -> Option<&Room> {
        self.rooms.iter().find(|r| r.name == name)
    }

    /// Room containing the cell, if any.
    pub fn room_of_cell(&self, c: Cell) -> Option<&Room> {
        self.rooms.iter().find(|r| r.rect.contains(c))
    }

    pub fn sensor(&self, id: &str) -> Option<&SensorPlacement> {
        self.sensor_placements.iter().find(|s| s.id == id)
    }

    /// Room a sensor reports into (cell sensors by containment, zone sensors by name).
    pub fn sensor_room(&self, id: &str) -> Option<&Room> {
        let s = self.sensor(id)?;
        match &s.location {
            SensorLocation::Cell(c) => self.room_of_cell(*c),
            SensorLocation::Zone(z) => self.room(z),
        }
    }

    /// Cell containing a continuous position in meters.
    pub fn cell_of(&self, p: Vec2) -> Option<Cell> {
        if p.x < 0.0 || p.y < 0.0 {
            return None;
        }
        let c = Cell::new((p.x / self.cell_size) as usize, (p.y / self.cell_size) as usize);
        if self.in_bounds(c) {
            Some(c)
        } else {
            None
        }
    }

    /// Center of a cell in meters.
    pub fn cell_center(&self, c: Cell) -> Vec2 {
        Vec2::new(
            (c.x as Real + 0.5) * self.cell_size,
            (c.y as Real + 0.5) * self.cell_size,
        )
    }

    /// Straight-line visibility between two positions, blocked by walls.
    pub fn line_of_sight(&self, from: Vec2, to: Vec2) -> bool {
        let dist = from.dist(to);
        let steps = (dist / (self.cell_size * 0.5)).ceil() as usize + 1;
        for i in 0..=steps {
            let t = i as Real / steps as Real;
            let p = from.add(to.sub(from).scale(t));
            match self.cell_of(p) {
                Some(c) if self.occupancy(c) == Occupancy::Free => {}
                _ => return false,
            }
        }
        true
    }
}
