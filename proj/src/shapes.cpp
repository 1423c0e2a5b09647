#include "nmbr9/shapes.hpp"

#include <algorithm>
#include <array>
#include <sstream>

namespace nmbr9 {

namespace {

constexpr std::string_view kDefaultCatalog =
    "digit 0\n"
    "###\n"
    "#.#\n"
    "#.#\n"
    "###\n"
    "\n"
    "digit 1\n"
    ".#\n"
    "##\n"
    ".#\n"
    ".#\n"
    "\n"
    "digit 2\n"
    "###\n"
    ".##\n"
    "##.\n"
    "###\n"
    "\n"
    "digit 3\n"
    "###\n"
    ".##\n"
    "..#\n"
    "###\n"
    "\n"
    "digit 4\n"
    "#.#\n"
    "#.#\n"
    "###\n"
    "..#\n"
    "\n"
    "digit 5\n"
    "###\n"
    "##.\n"
    ".##\n"
    "###\n"
    "\n"
    "digit 6\n"
    "#..\n"
    "###\n"
    "#.#\n"
    "###\n"
    "\n"
    "digit 7\n"
    "###\n"
    "..#\n"
    "..#\n"
    "..#\n"
    "\n"
    "digit 8\n"
    "###\n"
    "#.#\n"
    "###\n"
    "#.#\n"
    "###\n"
    "\n"
    "digit 9\n"
    "###\n"
    "#.#\n"
    "###\n"
    "..#\n";

// 4-connectivity check over an arbitrary cell set.
bool connected(const std::vector<Cell>& cells) {
  if (cells.empty()) return false;
  std::vector<Cell> stack = {cells.front()};
  std::vector<bool> seen(cells.size(), false);
  seen[0] = true;
  int reached = 1;
  auto index_of = [&](Cell c) -> int {
    auto it = std::lower_bound(cells.begin(), cells.end(), c);
    if (it == cells.end() || !(*it == c)) return -1;
    return static_cast<int>(it - cells.begin());
  };
  while (!stack.empty()) {
    Cell c = stack.back();
    stack.pop_back();
    const std::array<Cell, 4> nbrs = {Cell{c.row - 1, c.col}, Cell{c.row + 1, c.col},
                                      Cell{c.row, c.col - 1}, Cell{c.row, c.col + 1}};
    for (Cell n : nbrs) {
      int i = index_of(n);
      if (i >= 0 && !seen[i]) {
        seen[i] = true;
        ++reached;
        stack.push_back(n);
      }
    }
  }
  return reached == static_cast<int>(cells.size());
}

// Flood fill of empty cells from outside the bounding box, over the box
// extended by a 1-cell margin. Returns an occupancy-style mask of reachable
// empty cells, indexed by (row + 1) * (width + 2) + (col + 1).
std::vector<bool> outside_reachable(const Shape& s) {
  const int h = s.height() + 2;
  const int w = s.width() + 2;
  std::vector<bool> solid(static_cast<size_t>(h) * w, false);
  for (Cell c : s.cells()) solid[static_cast<size_t>(c.row + 1) * w + (c.col + 1)] = true;

  std::vector<bool> seen(static_cast<size_t>(h) * w, false);
  std::vector<int> stack;
  auto push = [&](int r, int c) {
    if (r < 0 || r >= h || c < 0 || c >= w) return;
    size_t i = static_cast<size_t>(r) * w + c;
    if (seen[i] || solid[i]) return;
    seen[i] = true;
    stack.push_back(static_cast<int>(i));
  };
  push(0, 0);  // margin ring is all empty and connected
  while (!stack.empty()) {
    int i = stack.back();
    stack.pop_back();
    int r = i / w, c = i % w;
    push(r - 1, c);
    push(r + 1, c);
    push(r, c - 1);
    push(r, c + 1);
  }
  return seen;
}

}  // namespace

Shape Shape::from_cells(std::vector<Cell> cells) {
  if (cells.empty()) throw ShapeError("shape has no cells");
  std::sort(cells.begin(), cells.end());
  if (std::adjacent_find(cells.begin(), cells.end()) != cells.end())
    throw ShapeError("shape has duplicate cells");

  int min_row = cells.front().row, min_col = cells.front().col;
  int max_row = cells.front().row, max_col = cells.front().col;
  for (Cell c : cells) {
    min_row = std::min(min_row, c.row);
    min_col = std::min(min_col, c.col);
    max_row = std::max(max_row, c.row);
    max_col = std::max(max_col, c.col);
  }
  for (Cell& c : cells) {
    c.row -= min_row;
    c.col -= min_col;
  }
  if (!connected(cells)) throw ShapeError("shape is not 4-connected");

  Shape s;
  s.cells_ = std::move(cells);
  s.height_ = max_row - min_row + 1;
  s.width_ = max_col - min_col + 1;
  return s;
}

Shape Shape::from_grid(const std::vector<std::string>& rows) {
  std::vector<Cell> cells;
  for (int r = 0; r < static_cast<int>(rows.size()); ++r) {
    for (int c = 0; c < static_cast<int>(rows[r].size()); ++c) {
      char ch = rows[r][c];
      if (ch == '#')
        cells.push_back({r, c});
      else if (ch != '.')
        throw ShapeError(std::string("bad grid character '") + ch + "'");
    }
  }
  return from_cells(std::move(cells));
}

bool Shape::contains(Cell c) const {
  return std::binary_search(cells_.begin(), cells_.end(), c);
}

std::vector<std::string> Shape::grid_rows() const {
  std::vector<std::string> rows(height_, std::string(width_, '.'));
  for (Cell c : cells_) rows[c.row][c.col] = '#';
  return rows;
}

Shape rotate90(const Shape& s) {
  const int max_row = s.height() - 1;
  std::vector<Cell> cells;
  cells.reserve(s.cells().size());
  for (Cell c : s.cells()) cells.push_back({c.col, max_row - c.row});
  return Shape::from_cells(std::move(cells));
}

OrientationSet distinct_orientations(const Shape& s) {
  std::vector<Shape> out;
  Shape cur = s;
  for (int turn = 0; turn < 4; ++turn) {
    if (std::find(out.begin(), out.end(), cur) == out.end()) out.push_back(cur);
    cur = rotate90(cur);
  }
  return OrientationSet(std::move(out));
}

std::vector<Cell> exterior_halo(const Shape& s) {
  const int w = s.width() + 2;
  std::vector<bool> reach = outside_reachable(s);
  std::vector<Cell> halo;
  for (int r = -1; r <= s.height(); ++r) {
    for (int c = -1; c <= s.width(); ++c) {
      if (!reach[static_cast<size_t>(r + 1) * w + (c + 1)]) continue;
      bool adjacent = s.contains({r - 1, c}) || s.contains({r + 1, c}) ||
                      s.contains({r, c - 1}) || s.contains({r, c + 1});
      if (adjacent) halo.push_back({r, c});
    }
  }
  return halo;  // row-major by construction
}

std::vector<Cell> enclosed_holes(const Shape& s) {
  const int w = s.width() + 2;
  std::vector<bool> reach = outside_reachable(s);
  std::vector<Cell> holes;
  for (int r = 0; r < s.height(); ++r) {
    for (int c = 0; c < s.width(); ++c) {
      if (s.contains({r, c})) continue;
      if (!reach[static_cast<size_t>(r + 1) * w + (c + 1)]) holes.push_back({r, c});
    }
  }
  return holes;
}

namespace {

const Shape& pinned_ring() {
  static const Shape ring = Shape::from_grid({"###", "#.#", "#.#", "###"});
  return ring;
}

// True when `inner` in some orientation fits entirely inside `hole_cells`.
bool fits_inside(const std::vector<Cell>& hole_cells, const Shape& inner) {
  if (hole_cells.empty()) return false;
  int min_row = hole_cells.front().row, min_col = hole_cells.front().col;
  int max_row = min_row, max_col = min_col;
  for (Cell c : hole_cells) {
    min_row = std::min(min_row, c.row);
    min_col = std::min(min_col, c.col);
    max_row = std::max(max_row, c.row);
    max_col = std::max(max_col, c.col);
  }
  auto in_hole = [&](Cell c) {
    return std::binary_search(hole_cells.begin(), hole_cells.end(), c);
  };
  for (const Shape& o : distinct_orientations(inner)) {
    if (static_cast<int>(o.area()) > static_cast<int>(hole_cells.size())) continue;
    for (int dr = min_row; dr + o.height() - 1 <= max_row; ++dr) {
      for (int dc = min_col; dc + o.width() - 1 <= max_col; ++dc) {
        bool all = true;
        for (Cell c : o.cells()) {
          if (!in_hole({c.row + dr, c.col + dc})) {
            all = false;
            break;
          }
        }
        if (all) return true;
      }
    }
  }
  return false;
}

}  // namespace

ShapeCatalog ShapeCatalog::parse(std::string_view text, std::string source) {
  ShapeCatalog cat;
  cat.shapes_.resize(10, Shape::from_grid({"#"}));
  cat.present_.assign(10, false);
  cat.source_ = std::move(source);

  std::vector<int> header_line(10, 0);
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  int digit = -1;          // digit of the open block, -1 between blocks
  int block_line = 0;      // line of the open block's header
  std::vector<std::string> rows;

  auto close_block = [&]() {
    if (digit < 0) return;
    Shape shape = [&] {
      try {
        return Shape::from_grid(rows);
      } catch (const ShapeError& e) {
        throw CatalogError("digit " + std::to_string(digit) + " (line " +
                               std::to_string(block_line) + "): " + e.what(),
                           digit, block_line);
      }
    }();
    if (digit == 0 && !(shape == pinned_ring()))
      throw CatalogError("digit 0 (line " + std::to_string(block_line) +
                             "): shape must be the 3x4 ring",
                         0, block_line);
    cat.shapes_[digit] = std::move(shape);
    cat.present_[digit] = true;
    header_line[digit] = block_line;
    digit = -1;
    rows.clear();
  };

  while (std::getline(in, line)) {
    ++line_no;
    while (!line.empty() && (line.back() == ' ' || line.back() == '\t' || line.back() == '\r'))
      line.pop_back();
    if (line.empty()) {
      close_block();
      continue;
    }
    if (line.rfind("digit ", 0) == 0) {
      close_block();
      const std::string num = line.substr(6);
      if (num.size() != 1 || num[0] < '0' || num[0] > '9') {
        // Distinguish out-of-range numerals from garbage for clearer errors.
        bool numeric = !num.empty() && num.find_first_not_of("0123456789") == std::string::npos;
        throw CatalogError(numeric ? "digit " + num + " (line " + std::to_string(line_no) +
                                         "): digit outside 0..9"
                                   : "line " + std::to_string(line_no) +
                                         ": malformed digit header '" + line + "'",
                           -1, line_no);
      }
      digit = num[0] - '0';
      if (cat.present_[digit])
        throw CatalogError("digit " + std::to_string(digit) + " (line " +
                               std::to_string(line_no) + "): duplicate digit",
                           digit, line_no);
      block_line = line_no;
      continue;
    }
    if (digit < 0)
      throw CatalogError("line " + std::to_string(line_no) +
                             ": expected 'digit <d>' header, got '" + line + "'",
                         -1, line_no);
    if (line.find_first_not_of("#.") != std::string::npos)
      throw CatalogError("digit " + std::to_string(digit) + " (line " +
                             std::to_string(line_no) + "): malformed grid row '" + line + "'",
                         digit, line_no);
    rows.push_back(line);
  }
  close_block();

  // No enclosed hole may be able to contain any catalog shape: stacked parts
  // cannot hide inside holes of the part below.
  for (int d = 0; d <= 9; ++d) {
    if (!cat.present_[d]) continue;
    std::vector<Cell> holes = enclosed_holes(cat.shapes_[d]);
    if (holes.empty()) continue;
    for (int inner = 0; inner <= 9; ++inner) {
      if (!cat.present_[inner]) continue;
      if (fits_inside(holes, cat.shapes_[inner]))
        throw CatalogError("digit " + std::to_string(d) + " (line " +
                               std::to_string(header_line[d]) + "): enclosed hole can contain digit " +
                               std::to_string(inner),
                           d, header_line[d]);
    }
  }
  return cat;
}

const ShapeCatalog& ShapeCatalog::bundled_default() {
  static const ShapeCatalog cat = ShapeCatalog::parse(kDefaultCatalog, "default");
  return cat;
}

bool ShapeCatalog::has(int digit) const {
  return digit >= 0 && digit <= 9 && present_[digit];
}

const Shape& ShapeCatalog::shape(int digit) const {
  if (!has(digit))
    throw std::out_of_range("catalog '" + source_ + "' has no digit " + std::to_string(digit));
  return shapes_[digit];
}

std::vector<int> ShapeCatalog::digits() const {
  std::vector<int> out;
  for (int d = 0; d <= 9; ++d)
    if (present_[d]) out.push_back(d);
  return out;
}

std::string_view default_catalog_text() { return kDefaultCatalog; }

}  // namespace nmbr9
