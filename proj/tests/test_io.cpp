#include "gge/io.hpp"

#include <gtest/gtest.h>
#include <unistd.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "gge/random.hpp"

namespace {

namespace fs = std::filesystem;
using gge::GeneralGraph;
using gge::GraphFormat;
using gge::KernelKind;
using gge::Matrix;

class IoTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("gge_io_test_" + std::to_string(::getpid()));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string file(const std::string& name, const std::string& content) {
    const auto path = (dir_ / name).string();
    std::ofstream out(path);
    out << content;
    return path;
  }

  static std::string slurp(const std::string& path) {
    std::ifstream in(path);
    return std::string(std::istreambuf_iterator<char>(in), {});
  }

  fs::path dir_;
};

TEST_F(IoTest, DenseCsvGraph) {
  const auto path = file("g.csv", "0,1\n1,0\n");
  const GeneralGraph g = gge::read_graph(path, GraphFormat::dense_csv);
  EXPECT_EQ(g.size(), 2);
  EXPECT_TRUE(g.is_dense());
  EXPECT_EQ(g.dense()(0, 1), 1.0);
  EXPECT_TRUE(g.symmetric());
}

TEST_F(IoTest, EdgeTsvGraph) {
  const auto path = file("g.tsv", "n=3\n1\t2\t0.5\n");
  const GeneralGraph g = gge::read_graph(path, GraphFormat::edge_tsv);
  EXPECT_EQ(g.size(), 3);
  ASSERT_EQ(g.triplets().size(), 1u);
  EXPECT_EQ(g.triplets()[0].row, 0);
  EXPECT_EQ(g.triplets()[0].col, 1);
  EXPECT_EQ(g.triplets()[0].weight, 0.5);
  EXPECT_EQ(g.mode(), GeneralGraph::SparseMode::symmetric_once);
}

TEST_F(IoTest, EdgeTsvOutOfRangeNamesLineTwo) {
  const auto path = file("bad.tsv", "n=2\n1\t3\t1\n");
  try {
    gge::read_graph(path, GraphFormat::edge_tsv);
    FAIL() << "expected a range error";
  } catch (const std::runtime_error& e) {
    EXPECT_NE(std::string(e.what()).find(":2:"), std::string::npos);
  }
}

TEST_F(IoTest, RaggedCsvNamesOffendingLine) {
  const auto path = file("ragged.csv", "1,2\n3\n");
  try {
    gge::read_matrix_csv(path);
    FAIL() << "expected a ragged-row error";
  } catch (const std::runtime_error& e) {
    EXPECT_NE(std::string(e.what()).find(":2:"), std::string::npos);
  }
}

TEST_F(IoTest, NonNumericFieldNamesLine) {
  const auto path = file("alpha.csv", "1,2\n3,x\n");
  try {
    gge::read_matrix_csv(path);
    FAIL() << "expected a parse error";
  } catch (const std::runtime_error& e) {
    EXPECT_NE(std::string(e.what()).find(":2:"), std::string::npos);
  }
}

TEST_F(IoTest, DenseGraphMustBeSquare) {
  const auto path = file("rect.csv", "1,2,3\n4,5,6\n");
  EXPECT_THROW(gge::read_graph(path, GraphFormat::dense_csv),
               std::runtime_error);
}

TEST_F(IoTest, LabelsRoundTrip) {
  const auto path = file("labels.csv", "1,1\n2,0\n3,2\n");
  const auto labels = gge::read_labels(path);
  EXPECT_EQ(labels.values(), (std::vector<int>{1, 0, 2}));
  EXPECT_EQ(labels.num_classes(), 2);
}

TEST_F(IoTest, LabelsAcceptUnorderedVertices) {
  const auto path = file("labels.csv", "3,2\n1,1\n2,0\n");
  const auto labels = gge::read_labels(path);
  EXPECT_EQ(labels.values(), (std::vector<int>{1, 0, 2}));
}

TEST_F(IoTest, LabelErrors) {
  EXPECT_THROW(gge::read_labels(file("empty.csv", "")), std::runtime_error);
  EXPECT_THROW(gge::read_labels(file("dup.csv", "1,1\n1,2\n")),
               std::runtime_error);
  EXPECT_THROW(gge::read_labels(file("neg.csv", "1,-1\n")), std::runtime_error);
  EXPECT_THROW(gge::read_labels(file("gap.csv", "1,1\n3,1\n")),
               std::runtime_error);
  EXPECT_THROW(gge::read_labels(file("zeros.csv", "1,0\n2,0\n")),
               std::runtime_error);
}

TEST_F(IoTest, ClassesOverride) {
  const auto path = file("labels.csv", "1,1\n2,2\n");
  EXPECT_EQ(gge::read_labels(path, 4).num_classes(), 4);
  EXPECT_THROW(gge::read_labels(path, 1), std::runtime_error);
  const auto zeros = file("zeros.csv", "1,0\n2,0\n");
  EXPECT_EQ(gge::read_labels(zeros, 3).num_classes(), 3);
}

TEST_F(IoTest, WriteReadWriteIsByteStable) {
  auto rng = gge::substream(301, "test");
  Matrix a(4, 4, 0.0);
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) {
      const double w = rng.bernoulli(0.4) ? 0.0 : rng.uniform(-2.0, 2.0);
      a(i, j) = w;
      a(j, i) = w;
    }
  const GeneralGraph g = GeneralGraph::from_dense(a);

  for (const auto format : {GraphFormat::dense_csv, GraphFormat::edge_tsv}) {
    const std::string ext = format == GraphFormat::dense_csv ? "csv" : "tsv";
    const auto p1 = (dir_ / ("w1." + ext)).string();
    const auto p2 = (dir_ / ("w2." + ext)).string();
    gge::write_graph(p1, g, format);
    const GeneralGraph back = gge::read_graph(p1, format);
    gge::write_graph(p2, back, format);
    EXPECT_EQ(slurp(p1), slurp(p2));
    EXPECT_TRUE(gge::densify(back).dense() == gge::densify(g).dense());
  }
}

TEST_F(IoTest, MatrixCsvRoundTripsValues) {
  auto rng = gge::substream(303, "test");
  Matrix m(5, 3);
  for (double& v : m.data) v = rng.uniform(-1.0, 1.0);
  const auto path = (dir_ / "m.csv").string();
  gge::write_matrix_csv(path, m);
  EXPECT_TRUE(gge::read_matrix_csv(path) == m);
}

TEST_F(IoTest, LabelWriterRoundTrips) {
  const gge::LabelVector labels({2, 0, 1, 1}, 2);
  const auto path = (dir_ / "labels.csv").string();
  gge::write_labels(path, labels);
  EXPECT_EQ(gge::read_labels(path).values(), labels.values());
}

TEST(KernelSpecParsing, NamesAndParameters) {
  EXPECT_EQ(gge::parse_kernel_spec("euclidean").kind, KernelKind::euclidean);
  EXPECT_EQ(gge::parse_kernel_spec("spearman").kind, KernelKind::spearman);
  const auto rbf = gge::parse_kernel_spec("rbf:sigma=2.5");
  EXPECT_EQ(rbf.kind, KernelKind::rbf);
  EXPECT_EQ(rbf.sigma, 2.5);
  const auto dk = gge::parse_kernel_spec("dk");
  EXPECT_EQ(dk.kind, KernelKind::distance_to_kernel);
  EXPECT_EQ(dk.base, KernelKind::euclidean);
  const auto dk2 = gge::parse_kernel_spec("dk:base=rbf,sigma=1.5");
  EXPECT_EQ(dk2.base, KernelKind::rbf);
  EXPECT_EQ(dk2.base_sigma, 1.5);
}

TEST(KernelSpecParsing, Errors) {
  EXPECT_THROW(gge::parse_kernel_spec("mystery"), std::runtime_error);
  EXPECT_THROW(gge::parse_kernel_spec("rbf:sigma=0"), std::invalid_argument);
  EXPECT_THROW(gge::parse_kernel_spec("euclidean:base=inner"),
               std::runtime_error);
  EXPECT_THROW(gge::parse_kernel_spec("dk:base=dk"), std::invalid_argument);
}

TEST(KernelSpecParsing, FormatParsesBack) {
  for (const std::string text :
       {"euclidean", "inner", "cosine", "spearman", "rbf:sigma=3",
        "dk:base=spearman", "dk:base=rbf,sigma=0.5"}) {
    const auto spec = gge::parse_kernel_spec(text);
    const auto round = gge::parse_kernel_spec(gge::format_kernel_spec(spec));
    EXPECT_EQ(round.kind, spec.kind);
    EXPECT_EQ(round.sigma, spec.sigma);
    EXPECT_EQ(round.base, spec.base);
    EXPECT_EQ(round.base_sigma, spec.base_sigma);
  }
}

}  // namespace
