#include "ipr/core/io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace ipr {

std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

namespace {

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

double parse_double(const std::string& s) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str()) throw std::invalid_argument("bad number: " + s);
  return v;
}

void check_uniform(const std::vector<ErrorSample>& samples) {
  for (const auto& s : samples) {
    if (s.context.dim() != samples.front().context.dim() ||
        s.error.size() != samples.front().error.size())
      throw std::invalid_argument("error sample dataset has mixed dimensions");
  }
}

}  // namespace

std::string error_samples_to_csv(const std::vector<ErrorSample>& samples) {
  if (samples.empty()) throw std::invalid_argument("empty dataset");
  check_uniform(samples);
  const int d = samples.front().context.dim();
  const int e = static_cast<int>(samples.front().error.size());
  std::ostringstream os;
  os << "frame_id,source";
  for (int i = 0; i < d; ++i) os << ",ctx_" << i;
  for (int i = 0; i < e; ++i) os << ",err_" << i;
  os << ",magnitude\n";
  for (const auto& s : samples) {
    os << s.frame_id << ',' << to_string(s.source);
    for (int i = 0; i < d; ++i) os << ',' << fmt17(s.context.vec()(i));
    for (int i = 0; i < e; ++i) os << ',' << fmt17(s.error(i));
    os << ',' << fmt17(s.magnitude) << '\n';
  }
  return os.str();
}

std::vector<ErrorSample> error_samples_from_csv(const std::string& csv) {
  std::istringstream is(csv);
  std::string line;
  if (!std::getline(is, line)) throw std::invalid_argument("empty csv");
  const auto header = split(line, ',');
  int d = 0;
  int e = 0;
  for (const auto& h : header) {
    if (h.rfind("ctx_", 0) == 0) ++d;
    if (h.rfind("err_", 0) == 0) ++e;
  }
  if (d == 0 || e == 0) throw std::invalid_argument("csv header lacks ctx/err columns");
  std::vector<ErrorSample> out;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const auto f = split(line, ',');
    if (static_cast<int>(f.size()) != 2 + d + e + 1)
      throw std::invalid_argument("csv row column count mismatch");
    Eigen::VectorXd ctx(d), err(e);
    for (int i = 0; i < d; ++i) ctx(i) = parse_double(f[2 + i]);
    for (int i = 0; i < e; ++i) err(i) = parse_double(f[2 + d + i]);
    ErrorSample s = ErrorSample::make(ContextFeatures(ctx), err,
                                      sample_source_from_string(f[1]), std::stoi(f[0]));
    s.magnitude = parse_double(f[2 + d + e]);
    out.push_back(std::move(s));
  }
  return out;
}

std::string error_samples_to_json(const std::vector<ErrorSample>& samples) {
  if (samples.empty()) throw std::invalid_argument("empty dataset");
  check_uniform(samples);
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& s : samples) {
    nlohmann::ordered_json rec;
    rec["frame_id"] = s.frame_id;
    rec["source"] = to_string(s.source);
    for (int i = 0; i < s.context.dim(); ++i)
      rec["ctx_" + std::to_string(i)] = s.context.vec()(i);
    for (int i = 0; i < s.error.size(); ++i) rec["err_" + std::to_string(i)] = s.error(i);
    rec["magnitude"] = s.magnitude;
    arr.push_back(std::move(rec));
  }
  return arr.dump(2);
}

std::vector<ErrorSample> error_samples_from_json(const std::string& text) {
  const auto arr = nlohmann::json::parse(text);
  std::vector<ErrorSample> out;
  for (const auto& rec : arr) {
    int d = 0;
    int e = 0;
    while (rec.contains("ctx_" + std::to_string(d))) ++d;
    while (rec.contains("err_" + std::to_string(e))) ++e;
    Eigen::VectorXd ctx(d), err(e);
    for (int i = 0; i < d; ++i) ctx(i) = rec.at("ctx_" + std::to_string(i)).get<double>();
    for (int i = 0; i < e; ++i) err(i) = rec.at("err_" + std::to_string(i)).get<double>();
    ErrorSample s = ErrorSample::make(ContextFeatures(ctx), err,
                                      sample_source_from_string(rec.at("source")),
                                      rec.at("frame_id").get<int>());
    s.magnitude = rec.at("magnitude").get<double>();
    out.push_back(std::move(s));
  }
  return out;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open for write: " + path);
  f << content;
}

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open for read: " + path);
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

}  // namespace ipr
