// Polyomino geometry for the Nmbr9 tile set: normalized cell sets, the four
// grid rotations, exterior halos, and the digit -> shape catalog file format.
#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace nmbr9 {

struct Cell {
  int row = 0;
  int col = 0;

  friend bool operator==(const Cell&, const Cell&) = default;
  friend auto operator<=>(const Cell&, const Cell&) = default;
};

class ShapeError : public std::runtime_error {
 public:
  explicit ShapeError(const std::string& what) : std::runtime_error(what) {}
};

// Parse or validation failure for a catalog file. Messages name the digit
// (when known) and the 1-based line where the problem was found.
class CatalogError : public std::runtime_error {
 public:
  CatalogError(const std::string& what, int digit, int line)
      : std::runtime_error(what), digit_(digit), line_(line) {}

  int digit() const { return digit_; }  // -1 when no digit applies
  int line() const { return line_; }

 private:
  int digit_;
  int line_;
};

// A non-empty, 4-connected polyomino, normalized so min row = min col = 0.
// Cells are kept sorted row-major; equal cell sets compare equal.
class Shape {
 public:
  // A default-constructed Shape is an empty placeholder (area 0) meant only
  // to be assigned over; every factory returns a validated non-empty shape.
  Shape() = default;

  // Builds from arbitrary cells; normalizes. Rejects empty, duplicate or
  // disconnected input.
  static Shape from_cells(std::vector<Cell> cells);

  // Builds from '#'/'.' rows, e.g. {"###", "#.#", "###"}. Short rows are
  // treated as right-padded with '.'.
  static Shape from_grid(const std::vector<std::string>& rows);

  const std::vector<Cell>& cells() const { return cells_; }
  int area() const { return static_cast<int>(cells_.size()); }
  int height() const { return height_; }
  int width() const { return width_; }
  bool contains(Cell c) const;

  // Rows of '#'/'.' covering the bounding box (for diagnostics and docs).
  std::vector<std::string> grid_rows() const;

  friend bool operator==(const Shape&, const Shape&) = default;

 private:
  std::vector<Cell> cells_;
  int height_ = 0;
  int width_ = 0;
};

// Quarter-turn clockwise: (r, c) -> (c, maxRow - r), then renormalized.
Shape rotate90(const Shape& s);

// The distinct orientations of a shape, deduplicated by normalized cell set,
// in the fixed order 0°, 90°, 180°, 270° (first occurrence kept). The result
// has 1, 2 or 4 entries, and index 0 is always the shape as given.
class OrientationSet {
 public:
  explicit OrientationSet(std::vector<Shape> shapes) : shapes_(std::move(shapes)) {}

  int size() const { return static_cast<int>(shapes_.size()); }
  const Shape& operator[](int i) const { return shapes_.at(i); }
  auto begin() const { return shapes_.begin(); }
  auto end() const { return shapes_.end(); }

 private:
  std::vector<Shape> shapes_;
};

OrientationSet distinct_orientations(const Shape& s);

// Empty cells orthogonally adjacent to the shape and reachable from outside
// its bounding box. Enclosed holes are excluded. Offsets are in the shape's
// coordinates and may be -1. Sorted row-major.
std::vector<Cell> exterior_halo(const Shape& s);

// Enclosed holes: empty in-box cells not reachable from outside. Sorted.
std::vector<Cell> enclosed_holes(const Shape& s);

// Digit -> shape table. A catalog file is a sequence of blocks separated by
// blank lines:
//
//   digit 0
//   ###
//   #.#
//   #.#
//   ###
//
// Rows use '#' (cell) and '.' (empty); trailing whitespace is ignored and
// short rows are right-padded. Digits may appear in any order, each at most
// once, and a catalog need not cover all ten digits (instances check their
// own range). The digit-0 shape, when present, must be the 3-wide, 4-tall
// ring; and no enclosed hole of any shape may be able to contain any catalog
// shape in any orientation.
class ShapeCatalog {
 public:
  // A default-constructed catalog is empty, meant only to be assigned over.
  ShapeCatalog() = default;

  // Parses catalog text. `source` names the origin (file path or "default")
  // and is echoed into exports and error messages.
  static ShapeCatalog parse(std::string_view text, std::string source);

  // The built-in tile set (all ten digits).
  static const ShapeCatalog& bundled_default();

  bool has(int digit) const;
  const Shape& shape(int digit) const;  // throws if absent
  const std::string& source() const { return source_; }
  std::vector<int> digits() const;  // present digits, ascending

 private:
  std::vector<Shape> shapes_;  // indexed by digit; present_ gates access
  std::vector<bool> present_;
  std::string source_;
};

// Text of the built-in catalog (also shipped at data/default_catalog.txt).
std::string_view default_catalog_text();

}  // namespace nmbr9
