#include "quantreg/dataset.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "quantreg/rng.hpp"

namespace quantreg {

namespace {
// stream ids within a dataset seed
constexpr std::uint64_t kStreamW0 = 1;
constexpr std::uint64_t kStreamX = 2;
constexpr std::uint64_t kStreamNoise = 3;

std::vector<double> split_line(const std::string& line) {
  std::vector<double> out;
  std::stringstream ss(line);
  std::string tok;
  while (std::getline(ss, tok, ',')) out.push_back(std::stod(tok));
  return out;
}
}  // namespace

Dataset generate(int N, int M, double rho, double sigma2, std::uint64_t seed) {
  if (N < 1 || M < 1) throw std::invalid_argument("generate: N and M must be >= 1");
  if (!(rho > 0.0) || sigma2 < 0.0) throw std::invalid_argument("generate: bad rho/sigma2");

  Dataset d;
  d.N = N;
  d.M = M;
  d.rho = rho;
  d.sigma2 = sigma2;
  d.seed = seed;

  CounterRng rng_w0(seed, kStreamW0);
  d.w0.resize(N);
  const double sq_rho = std::sqrt(rho);
  for (int i = 0; i < N; ++i) d.w0[i] = sq_rho * rng_w0.normal();

  CounterRng rng_x(seed, kStreamX);
  d.X.resize(M, N);
  const double sq_n = 1.0 / std::sqrt(static_cast<double>(N));
  for (int mu = 0; mu < M; ++mu)
    for (int i = 0; i < N; ++i) d.X(mu, i) = sq_n * rng_x.normal();

  CounterRng rng_eps(seed, kStreamNoise);
  const double sq_noise = std::sqrt(sigma2);
  d.y = d.X * d.w0;
  for (int mu = 0; mu < M; ++mu) d.y[mu] += sq_noise * rng_eps.normal();
  return d;
}

namespace {
void write_row(std::ostream& out, const double* v, int n) {
  char buf[32];
  for (int i = 0; i < n; ++i) {
    std::snprintf(buf, sizeof(buf), "%.17g", v[i]);
    out << buf << (i + 1 < n ? "," : "\n");
  }
}
}  // namespace

void save_csv(const Dataset& d, std::ostream& out) {
  out << "N,M,rho,sigma2,seed\n";
  char buf[128];
  std::snprintf(buf, sizeof(buf), "%d,%d,%.17g,%.17g,%llu\n", d.N, d.M, d.rho, d.sigma2,
                static_cast<unsigned long long>(d.seed));
  out << buf;
  write_row(out, d.w0.data(), d.N);
  write_row(out, d.y.data(), d.M);
  for (int mu = 0; mu < d.M; ++mu) {
    Eigen::VectorXd row = d.X.row(mu);
    write_row(out, row.data(), d.N);
  }
}

void save_csv(const Dataset& d, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  save_csv(d, out);
}

Dataset load_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("empty dataset file");
  if (!std::getline(in, line)) throw std::runtime_error("missing dataset header values");
  std::stringstream hs(line);
  std::string tok;
  std::vector<std::string> head;
  while (std::getline(hs, tok, ',')) head.push_back(tok);
  if (head.size() != 5) throw std::runtime_error("malformed dataset header");

  Dataset d;
  d.N = std::stoi(head[0]);
  d.M = std::stoi(head[1]);
  d.rho = std::stod(head[2]);
  d.sigma2 = std::stod(head[3]);
  d.seed = std::stoull(head[4]);

  if (!std::getline(in, line)) throw std::runtime_error("missing w0 row");
  auto w0 = split_line(line);
  if (static_cast<int>(w0.size()) != d.N) throw std::runtime_error("w0 length mismatch");
  d.w0 = Eigen::Map<Eigen::VectorXd>(w0.data(), d.N);

  if (!std::getline(in, line)) throw std::runtime_error("missing y row");
  auto y = split_line(line);
  if (static_cast<int>(y.size()) != d.M) throw std::runtime_error("y length mismatch");
  d.y = Eigen::Map<Eigen::VectorXd>(y.data(), d.M);

  d.X.resize(d.M, d.N);
  for (int mu = 0; mu < d.M; ++mu) {
    if (!std::getline(in, line)) throw std::runtime_error("missing X row");
    auto row = split_line(line);
    if (static_cast<int>(row.size()) != d.N) throw std::runtime_error("X row length mismatch");
    for (int i = 0; i < d.N; ++i) d.X(mu, i) = row[i];
  }
  return d;
}

Dataset load_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return load_csv(in);
}

}  // namespace quantreg
