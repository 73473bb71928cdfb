#include "flagcert/certificate.hpp"
#include "flagcert/construction.hpp"
#include "flagcert/flag.hpp"
#include "flagcert/linalg.hpp"
#include "flagcert/orgraph.hpp"
#include "flagcert/sdp.hpp"

#include <benchmark/benchmark.h>

#include <sstream>

using namespace flagcert;

namespace {

void canonical_form_order5(benchmark::State& state) {
  const auto& graphs = enumerate_orgraphs(5);
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(canonical_form(graphs[i]));
    i = (i + 1) % graphs.size();
  }
}
BENCHMARK(canonical_form_order5);

void induced_density_p3_order6(benchmark::State& state) {
  const auto& hosts = enumerate_orgraphs(6);
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(induced_density(graphs::path3(), hosts[i]));
    i = (i + 7919) % hosts.size();
  }
}
BENCHMARK(induced_density_p3_order6);

void product_table_order3_flags(benchmark::State& state) {
  const FlagBasis basis = vertex_type_order3_basis();
  const auto threads = static_cast<unsigned>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(product_table(basis, 5, threads));
}
BENCHMARK(product_table_order3_flags)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

void psd_check_published_matrix(benchmark::State& state) {
  const RationalMatrix a = builtin_matrix("p3");
  for (auto _ : state) benchmark::DoNotOptimize(psd_check_exact(a));
}
BENCHMARK(psd_check_published_matrix)->Unit(benchmark::kMicrosecond);

void verify_p3_with_table(benchmark::State& state) {
  const Certificate cert = builtin_certificate("p3");
  const ProductTable table = product_table(cert.basis(), cert.host_order);
  for (auto _ : state) benchmark::DoNotOptimize(verify(cert, table));
}
BENCHMARK(verify_p3_with_table)->Unit(benchmark::kMillisecond);

void verify_p3_from_scratch(benchmark::State& state) {
  const Certificate cert = builtin_certificate("p3");
  for (auto _ : state) benchmark::DoNotOptimize(verify(cert));
}
BENCHMARK(verify_p3_from_scratch)->Unit(benchmark::kMillisecond);

void limit_densities_c4(benchmark::State& state) {
  const BlowupSpec spec = builtin_construction("c4");
  const int order = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(limit_densities(spec, order));
}
BENCHMARK(limit_densities_c4)->DenseRange(3, 5)->Unit(benchmark::kMillisecond);

void sdpa_export_p3(benchmark::State& state) {
  const SdpProblem problem = build_problem(graphs::path3(), TypeSigma::vertex(), 3, 5);
  for (auto _ : state) {
    std::ostringstream out;
    export_sdpa(problem, out);
    benchmark::DoNotOptimize(out.str().size());
  }
}
BENCHMARK(sdpa_export_p3)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
