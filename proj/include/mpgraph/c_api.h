/*!
 *  Copyright (c) 2026 by Contributors
 * \file mpgraph/c_api.h
 * \brief C interface. Objects are opaque handles released with the matching
 *  *_free function; every call returns an MPGStatus and, on failure, leaves
 *  a message for MPGGetLastError() on the calling thread.
 */
#ifndef MPGRAPH_C_API_H_
#define MPGRAPH_C_API_H_

#include <stddef.h>
#include <stdint.h>

#if defined(MPG_BUILDING_SHARED)
#define MPG_DLL __attribute__((visibility("default")))
#else
#define MPG_DLL
#endif

#ifdef __cplusplus
extern "C" {
#endif

/*! \brief Same values as mpg::ErrorCode. */
typedef enum {
  MPG_OK = 0,
  MPG_ERR_INVALID_ARGUMENT = 1,
  MPG_ERR_SHAPE = 2,
  MPG_ERR_RANGE = 3,
  MPG_ERR_LOOKUP = 4,
  MPG_ERR_DIVIDE_BY_ZERO = 5,
  MPG_ERR_INVALID_STRATEGY = 6,
  MPG_ERR_STATE = 7,
  MPG_ERR_IO = 8,
  MPG_ERR_CAP_EXCEEDED = 9,
  MPG_ERR_CORRECTNESS = 10,
  MPG_ERR_INTERNAL = 11,
} MPGStatus;

typedef struct MPGGraph_* MPGGraphHandle;
typedef struct MPGFeatures_* MPGFeaturesHandle;

/*! \brief Message of the last failed call on this thread; "" if none. */
MPG_DLL const char* MPGGetLastError(void);
MPG_DLL const char* MPGStatusName(MPGStatus status);

/* ---- graphs ---- */

MPG_DLL MPGStatus MPGGraphCreate(uint64_t num_nodes, const uint32_t* src, const uint32_t* dst,
                                 uint64_t num_edges, MPGGraphHandle* out);
/*! \brief Edge-list text, or the binary format when the path ends in ".bin". */
MPG_DLL MPGStatus MPGGraphLoad(const char* path, MPGGraphHandle* out);
MPG_DLL MPGStatus MPGGraphSave(MPGGraphHandle g, const char* path);
/*! \brief `spec` as in "power_law:n=1000,deg=20". */
MPG_DLL MPGStatus MPGGraphGenerate(const char* spec, uint64_t seed, MPGGraphHandle* out);
MPG_DLL MPGStatus MPGGraphReverse(MPGGraphHandle g, MPGGraphHandle* out);
MPG_DLL MPGStatus MPGGraphNumNodes(MPGGraphHandle g, uint64_t* out);
MPG_DLL MPGStatus MPGGraphNumEdges(MPGGraphHandle g, uint64_t* out);
/*! \brief Copies endpoints into caller arrays of NumEdges entries; either may be NULL. */
MPG_DLL MPGStatus MPGGraphEdges(MPGGraphHandle g, uint32_t* src, uint32_t* dst);
/*! \brief Writes NumNodes entries. */
MPG_DLL MPGStatus MPGGraphInDegrees(MPGGraphHandle g, uint64_t* out);
MPG_DLL MPGStatus MPGGraphFree(MPGGraphHandle g);

/* ---- dense features (row-major doubles) ---- */

MPG_DLL MPGStatus MPGFeaturesCreate(uint64_t rows, uint64_t cols, const double* values,
                                    MPGFeaturesHandle* out);
/*! \brief CSV text, or the binary format when the path ends in ".bin". */
MPG_DLL MPGStatus MPGFeaturesLoad(const char* path, MPGFeaturesHandle* out);
MPG_DLL MPGStatus MPGFeaturesShape(MPGFeaturesHandle f, uint64_t* rows, uint64_t* cols);
/*! \brief Copies rows*cols values into `out`. */
MPG_DLL MPGStatus MPGFeaturesCopyTo(MPGFeaturesHandle f, double* out);
MPG_DLL MPGStatus MPGFeaturesFree(MPGFeaturesHandle f);

/* ---- kernels ----
 * `phi` is a message name such as "u_mul_e", "copy_u" or "u_dot_v/8"; `rho`
 * is sum|max|min|mean; `strategy` is auto|serial|np|ep|fp; `format` is
 * auto|coo|csr|csc. Unused operands may be NULL. threads = 0 uses the
 * default worker count.
 */

MPG_DLL MPGStatus MPGGSpMM(MPGGraphHandle g, const char* phi, const char* rho,
                           MPGFeaturesHandle lhs, MPGFeaturesHandle rhs, const char* strategy,
                           const char* format, int threads, MPGFeaturesHandle* out);
MPG_DLL MPGStatus MPGGSDDMM(MPGGraphHandle g, const char* phi, MPGFeaturesHandle lhs,
                            MPGFeaturesHandle rhs, const char* strategy, const char* format,
                            int threads, MPGFeaturesHandle* out);

/* ---- training ---- */

/*!
 * \brief Trains a two-layer model (`model` is gcn|sage|gat|gat_unfused) with
 *  the given hidden width and class count, writing `epochs` losses.
 *  Labels below zero mark unlabelled nodes.
 */
MPG_DLL MPGStatus MPGTrain(MPGGraphHandle g, MPGFeaturesHandle features, const int32_t* labels,
                           const char* model, uint64_t hidden, uint64_t num_classes,
                           uint32_t heads, int epochs, double lr, uint64_t seed,
                           double* losses_out);

/* ---- benchmarks; each writes a CSV report to `out_path` ---- */

typedef struct {
  const char* graph;        /*!< generator spec */
  uint64_t seed;
  const uint64_t* feat_sizes;
  size_t num_feat_sizes;
  uint32_t heads;
  const char* strategies;   /*!< comma list of serial|np|ep|ep_atomic|fp */
  const char* formats;      /*!< comma list of coo|csr|csc */
  int repeats;
  int threads;
  double tolerance;         /*!< allowed relative difference from the serial kernel */
} MPGKernelBenchArgs;

/*! \brief Returns MPG_ERR_CORRECTNESS if any cell disagrees with the serial kernel. */
MPG_DLL MPGStatus MPGBenchKernels(const MPGKernelBenchArgs* args, const char* out_path);

typedef struct {
  const char* graph_kind;   /*!< power_law|constant_indegree|chain */
  uint64_t degree;
  const uint64_t* sizes;
  size_t num_sizes;
  const uint64_t* feat_sizes;
  size_t num_feat_sizes;
  uint32_t heads;
  uint64_t cap_bytes;
  uint64_t seed;
  int threads;
} MPGMemoryBenchArgs;

MPG_DLL MPGStatus MPGBenchMemory(const MPGMemoryBenchArgs* args, const char* out_path);

MPG_DLL MPGStatus MPGBenchOverhead(const uint64_t* sizes, size_t num_sizes, uint64_t feat_size,
                                   int repeats, int threads, uint64_t seed, const char* out_path);

#ifdef __cplusplus
}  // extern "C"
#endif

#endif  // MPGRAPH_C_API_H_
