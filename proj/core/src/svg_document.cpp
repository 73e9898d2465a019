#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdlib>

#include <expat.h>
#include <fmt/format.h>

#include "seechart/deconstructor.hpp"
#include "seechart/error.hpp"

namespace seechart {

std::string_view SvgElement::attr(std::string_view name) const {
  auto it = attributes.find(name);
  return it == attributes.end() ? std::string_view{} : std::string_view(it->second);
}

bool SvgElement::has_class(std::string_view cls) const {
  auto classes = attr("class");
  std::size_t pos = 0;
  while (pos < classes.size()) {
    while (pos < classes.size() && std::isspace(static_cast<unsigned char>(classes[pos]))) ++pos;
    auto end = pos;
    while (end < classes.size() && !std::isspace(static_cast<unsigned char>(classes[end]))) ++end;
    if (classes.substr(pos, end - pos) == cls) return true;
    pos = end;
  }
  return false;
}

std::optional<std::size_t> SvgElement::class_index(std::string_view prefix) const {
  auto classes = attr("class");
  std::size_t pos = 0;
  while ((pos = classes.find(prefix, pos)) != std::string_view::npos) {
    if (pos > 0 && !std::isspace(static_cast<unsigned char>(classes[pos - 1]))) {
      pos += prefix.size();
      continue;
    }
    auto start = pos + prefix.size();
    auto end = start;
    while (end < classes.size() && std::isdigit(static_cast<unsigned char>(classes[end]))) ++end;
    if (end > start && (end == classes.size() || std::isspace(static_cast<unsigned char>(classes[end])))) {
      std::size_t v = 0;
      std::from_chars(classes.data() + start, classes.data() + end, v);
      return v;
    }
    pos = end;
  }
  return std::nullopt;
}

namespace {

double attr_number(const SvgElement& e, std::string_view name, double fallback = 0.0) {
  auto text = std::string(e.attr(name));
  if (text.empty()) return fallback;
  // "10 20" lists (text x) use the first entry.
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  return end == text.c_str() ? fallback : v;
}

Point2 parse_translate(std::string_view transform) {
  Point2 out;
  auto pos = transform.find("translate(");
  if (pos == std::string_view::npos) return out;
  std::string args(transform.substr(pos + 10, transform.find(')', pos) - pos - 10));
  std::replace(args.begin(), args.end(), ',', ' ');
  char* end = nullptr;
  out.x = std::strtod(args.c_str(), &end);
  char* end2 = nullptr;
  const double y = std::strtod(end, &end2);
  if (end2 != end) out.y = y;
  return out;
}

// Endpoints of each path command; curves contribute their end points only.
std::vector<Point2> parse_path(std::string_view d) {
  std::vector<Point2> pts;
  std::vector<double> nums;
  char cmd = 0;
  Point2 cur{}, start{};
  auto flush = [&] {
    if (cmd == 0) return;
    const bool rel = std::islower(static_cast<unsigned char>(cmd));
    const char up = static_cast<char>(std::toupper(static_cast<unsigned char>(cmd)));
    std::size_t arity = 0;
    switch (up) {
      case 'M': case 'L': case 'T': arity = 2; break;
      case 'H': case 'V': arity = 1; break;
      case 'C': arity = 6; break;
      case 'S': case 'Q': arity = 4; break;
      case 'A': arity = 7; break;
      case 'Z': arity = 0; break;
      default: arity = 0; break;
    }
    if (up == 'Z') {
      cur = start;
      return;
    }
    if (arity == 0) return;
    for (std::size_t i = 0; i + arity <= nums.size(); i += arity) {
      Point2 p = cur;
      if (up == 'H') {
        p.x = rel ? cur.x + nums[i] : nums[i];
      } else if (up == 'V') {
        p.y = rel ? cur.y + nums[i] : nums[i];
      } else {
        const double x = nums[i + arity - 2], y = nums[i + arity - 1];
        p = rel ? Point2{cur.x + x, cur.y + y} : Point2{x, y};
      }
      if (up == 'M' && i == 0) start = p;
      pts.push_back(p);
      cur = p;
    }
  };
  std::size_t i = 0;
  while (i < d.size()) {
    const char c = d[i];
    if (std::isalpha(static_cast<unsigned char>(c)) && c != 'e' && c != 'E') {
      flush();
      nums.clear();
      cmd = c;
      ++i;
    } else if (std::isdigit(static_cast<unsigned char>(c)) || c == '-' || c == '+' || c == '.') {
      std::string token(d.substr(i, 32));
      char* end = nullptr;
      const double v = std::strtod(token.c_str(), &end);
      if (end == token.c_str()) {
        ++i;
        continue;
      }
      nums.push_back(v);
      i += static_cast<std::size_t>(end - token.c_str());
    } else {
      ++i;
    }
  }
  flush();
  return pts;
}

struct Builder {
  std::vector<SvgElement> elements;
  std::vector<std::size_t> stack;
};

void on_start(void* data, const XML_Char* name, const XML_Char** atts) {
  auto& b = *static_cast<Builder*>(data);
  SvgElement e;
  std::string_view tag(name);
  if (auto colon = tag.rfind(':'); colon != std::string_view::npos) tag.remove_prefix(colon + 1);
  e.tag = std::string(tag);
  for (std::size_t i = 0; atts[i] != nullptr; i += 2) e.attributes.emplace(atts[i], atts[i + 1]);
  const auto idx = b.elements.size();
  if (!b.stack.empty()) {
    e.parent = b.stack.back();
    e.offset = b.elements[b.stack.back()].offset;
    b.elements[b.stack.back()].children.push_back(idx);
  }
  const auto t = parse_translate(e.attr("transform"));
  e.offset.x += t.x;
  e.offset.y += t.y;
  b.elements.push_back(std::move(e));
  b.stack.push_back(idx);
}

void on_end(void* data, const XML_Char*) {
  auto& b = *static_cast<Builder*>(data);
  b.stack.pop_back();
}

void on_text(void* data, const XML_Char* s, int len) {
  auto& b = *static_cast<Builder*>(data);
  for (auto idx : b.stack) b.elements[idx].text.append(s, static_cast<std::size_t>(len));
}

std::optional<BBox> own_box(SvgElement& e, const std::vector<SvgElement>& all) {
  const auto ox = e.offset.x, oy = e.offset.y;
  if (e.tag == "rect") {
    return BBox{attr_number(e, "x") + ox, attr_number(e, "y") + oy, attr_number(e, "width"),
                attr_number(e, "height")};
  }
  if (e.tag == "circle") {
    const double r = attr_number(e, "r");
    return BBox{attr_number(e, "cx") + ox - r, attr_number(e, "cy") + oy - r, 2 * r, 2 * r};
  }
  if (e.tag == "line") {
    const double x1 = attr_number(e, "x1") + ox, x2 = attr_number(e, "x2") + ox;
    const double y1 = attr_number(e, "y1") + oy, y2 = attr_number(e, "y2") + oy;
    e.vertices = {{x1, y1}, {x2, y2}};
    return BBox{std::min(x1, x2), std::min(y1, y2), std::abs(x2 - x1), std::abs(y2 - y1)};
  }
  if (e.tag == "path") {
    e.vertices = parse_path(e.attr("d"));
    if (e.vertices.empty()) return std::nullopt;
    for (auto& p : e.vertices) p.x += ox, p.y += oy;
    auto [minx, maxx] = std::minmax_element(e.vertices.begin(), e.vertices.end(),
                                            [](auto& a, auto& b) { return a.x < b.x; });
    auto [miny, maxy] = std::minmax_element(e.vertices.begin(), e.vertices.end(),
                                            [](auto& a, auto& b) { return a.y < b.y; });
    return BBox{minx->x, miny->y, maxx->x - minx->x, maxy->y - miny->y};
  }
  if (e.tag == "text" || e.tag == "tspan") {
    if (e.attributes.count("x") || e.attributes.count("y")) {
      return BBox{attr_number(e, "x") + ox, attr_number(e, "y") + oy, 0.0, 0.0};
    }
    for (auto c : e.children) {
      if (all[c].box) return all[c].box;
    }
    if (e.tag == "text") return BBox{ox, oy, 0.0, 0.0};
  }
  return std::nullopt;
}

}  // namespace

SvgChartDocument SvgChartDocument::parse(std::string_view text) {
  Builder b;
  XML_Parser parser = XML_ParserCreate(nullptr);
  XML_SetUserData(parser, &b);
  XML_SetElementHandler(parser, on_start, on_end);
  XML_SetCharacterDataHandler(parser, on_text);
  const auto status = XML_Parse(parser, text.data(), static_cast<int>(text.size()), XML_TRUE);
  if (status != XML_STATUS_OK) {
    auto msg = fmt::format("malformed SVG at line {}, column {}: {}",
                           XML_GetCurrentLineNumber(parser), XML_GetCurrentColumnNumber(parser),
                           XML_ErrorString(XML_GetErrorCode(parser)));
    XML_ParserFree(parser);
    throw ParseError("svg", msg);
  }
  XML_ParserFree(parser);
  if (b.elements.empty() || b.elements.front().tag != "svg") {
    throw ParseError("svg", "document root is not <svg>");
  }

  // Children follow their parent, so a reverse sweep sees every child first.
  SvgChartDocument doc;
  auto& els = b.elements;
  for (std::size_t i = els.size(); i-- > 0;) {
    auto& e = els[i];
    e.box = own_box(e, els);
    if (e.box || e.tag == "text") continue;
    std::optional<BBox> acc;
    for (auto c : e.children) {
      const auto& cb = els[c].box;
      if (!cb) continue;
      if (!acc) {
        acc = cb;
        continue;
      }
      const double x0 = std::min(acc->x, cb->x), y0 = std::min(acc->y, cb->y);
      const double x1 = std::max(acc->right(), cb->right()), y1 = std::max(acc->bottom(), cb->bottom());
      acc = BBox{x0, y0, x1 - x0, y1 - y0};
    }
    e.box = acc;
  }
  doc.elements_ = std::move(els);
  return doc;
}

std::vector<std::size_t> SvgChartDocument::with_class(std::string_view cls) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < elements_.size(); ++i) {
    if (elements_[i].has_class(cls)) out.push_back(i);
  }
  return out;
}

std::vector<std::size_t> SvgChartDocument::descendants(std::size_t root, std::string_view cls,
                                                       std::string_view tag) const {
  std::vector<std::size_t> out;
  std::vector<std::size_t> todo(elements_[root].children.rbegin(), elements_[root].children.rend());
  while (!todo.empty()) {
    const auto i = todo.back();
    todo.pop_back();
    const auto& e = elements_[i];
    if ((cls.empty() || e.has_class(cls)) && (tag.empty() || e.tag == tag)) out.push_back(i);
    todo.insert(todo.end(), e.children.rbegin(), e.children.rend());
  }
  return out;
}

bool SvgChartDocument::is_descendant(std::size_t node, std::size_t ancestor) const {
  auto p = elements_[node].parent;
  while (p) {
    if (*p == ancestor) return true;
    p = elements_[*p].parent;
  }
  return false;
}

}  // namespace seechart
