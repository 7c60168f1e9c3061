#pragma once

#include <string>

#include "chordbasis/diagram.hpp"

namespace chordbasis {

/// The canonical string.
std::string render_text(const ChordDiagram& d);

/// Circles in a row, feet equally spaced clockwise from 12 o'clock, chords
/// as dotted segments.  Output depends only on the diagram.
std::string render_svg(const ChordDiagram& d);

}  // namespace chordbasis
