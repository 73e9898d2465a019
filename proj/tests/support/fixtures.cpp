#include <array>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include <fmt/format.h>

#include "test_support.hpp"

namespace seechart::testing {

std::filesystem::path data_dir() { return SEECHART_TEST_DATA_DIR; }

ChartSpec load_fixture(std::string_view name) {
  std::ifstream in(data_dir() / (std::string(name) + ".json"));
  std::stringstream buf;
  buf << in.rdbuf();
  return from_json(buf.str());
}

Series make_series(const std::vector<double>& values, std::vector<std::string> categories) {
  Series s;
  for (std::size_t i = 0; i < values.size(); ++i) {
    s.points.push_back({i < categories.size() ? categories[i] : fmt::format("C{}", i), values[i]});
  }
  return s;
}

ChartSpec single_chart(ChartType type, const std::vector<double>& values, std::vector<std::string> categories) {
  ChartSpec c;
  c.chart_type = type;
  c.title = "Test chart";
  c.x_axis = {"Item", DataType::Nominal};
  c.y_axis = {"Amount", DataType::Quantitative};
  c.series.push_back(make_series(values, std::move(categories)));
  return c;
}

ChartType random_type(std::mt19937_64& rng) {
  constexpr std::array types = {ChartType::Bar,  ChartType::GroupedBar, ChartType::StackedBar,
                                ChartType::Line, ChartType::MultiLine,  ChartType::Pie};
  return types[std::uniform_int_distribution<std::size_t>(0, types.size() - 1)(rng)];
}

ChartSpec random_chart(std::mt19937_64& rng, ChartType type, std::size_t max_points) {
  static constexpr std::array months = {"Jan", "Feb", "Mar", "Apr", "May", "Jun",
                                        "Jul", "Aug", "Sep", "Oct", "Nov", "Dec"};
  static constexpr std::array names = {"North", "South", "East", "West", "Central", "Coastal"};
  const auto n = std::uniform_int_distribution<std::size_t>(2, std::max<std::size_t>(2, max_points))(rng);
  const bool multi = is_multi_series(type);
  const auto n_series = multi ? std::uniform_int_distribution<std::size_t>(2, 4)(rng) : 1;
  const bool non_negative = type == ChartType::Pie || type == ChartType::StackedBar ||
                            std::bernoulli_distribution(0.8)(rng);
  const double scale = std::pow(10.0, std::uniform_int_distribution<int>(0, 4)(rng));
  const double lo = non_negative ? 0.0 : -0.5 * scale;

  ChartSpec c;
  c.chart_type = type;
  c.title = fmt::format("Random {} chart", chart_type_phrase(type));
  const int start_year = std::uniform_int_distribution<int>(1950, 2000)(rng);
  const bool monthly = std::bernoulli_distribution(0.5)(rng);
  c.x_axis = {monthly ? "Month" : "Year", DataType::Temporal};
  c.y_axis = {"Value", DataType::Quantitative};
  if (type == ChartType::Pie) c.x_axis = {"Region", DataType::Nominal};
  std::uniform_real_distribution<double> value(lo, scale);
  for (std::size_t s = 0; s < n_series; ++s) {
    Series series;
    if (multi) series.name = fmt::format("Group {}", static_cast<char>('A' + s));
    for (std::size_t i = 0; i < n; ++i) {
      std::string cat;
      if (type == ChartType::Pie) {
        cat = i < names.size() ? names[i] : fmt::format("Region {}", i + 1);
      } else if (monthly) {
        cat = fmt::format("{} {}", months[i % 12], start_year + static_cast<int>(i / 12));
      } else {
        cat = std::to_string(start_year + static_cast<int>(i));
      }
      series.points.push_back({cat, std::round(value(rng) * 100.0) / 100.0});
    }
    c.series.push_back(std::move(series));
  }
  return c;
}

std::string run_command(const std::string& command, int* status) {
  std::string out;
  FILE* pipe = ::popen(command.c_str(), "r");
  if (!pipe) {
    if (status) *status = -1;
    return out;
  }
  std::array<char, 4096> buf{};
  std::size_t got = 0;
  while ((got = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) out.append(buf.data(), got);
  const int rc = ::pclose(pipe);
  if (status) *status = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
  return out;
}

}  // namespace seechart::testing
