#include <gtest/gtest.h>

#include "lobbyml/error.hpp"
#include "lobbyml/sparse_vector.hpp"

namespace lobbyml {
namespace {

TEST(SparseVector, FromPairsSortsAndDropsZeros) {
  SparseVector v = SparseVector::from_pairs(10, {{7, 2.0}, {1, -1.0}, {4, 0.0}});
  ASSERT_EQ(v.nnz(), 2u);
  EXPECT_EQ(v.entries()[0], (SparseVector::Entry{1, -1.0}));
  EXPECT_EQ(v.entries()[1], (SparseVector::Entry{7, 2.0}));
  EXPECT_EQ(v.dimension(), 10u);
  EXPECT_EQ(v.at(7), 2.0);
  EXPECT_EQ(v.at(4), 0.0);
}

TEST(SparseVector, RejectsDuplicatesAndOutOfRange) {
  EXPECT_THROW(SparseVector::from_pairs(3, {{1, 1.0}, {1, 2.0}}), ContractError);
  EXPECT_THROW(SparseVector::from_pairs(3, {{3, 1.0}}), ContractError);
}

TEST(SparseVector, Arithmetic) {
  std::vector<double> dense{0, 3, 0, 4};
  SparseVector v = SparseVector::from_dense(dense);
  EXPECT_EQ(v.nnz(), 2u);
  EXPECT_DOUBLE_EQ(v.norm(), 5.0);
  EXPECT_DOUBLE_EQ(v.sum(), 7.0);
  EXPECT_DOUBLE_EQ(v.dot(dense), 25.0);
  v.scale(2.0);
  EXPECT_DOUBLE_EQ(v.at(3), 8.0);
  v.scale(0.0);
  EXPECT_TRUE(v.empty());
  EXPECT_EQ(v.dimension(), 4u);
}

}  // namespace
}  // namespace lobbyml
