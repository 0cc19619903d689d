#ifndef ONTOCLUST_ONTOCLUST_HPP
#define ONTOCLUST_ONTOCLUST_HPP

#include "clustering.hpp"
#include "dataset.hpp"
#include "error.hpp"
#include "evaluation.hpp"
#include "genetic.hpp"
#include "matrix.hpp"
#include "ontology.hpp"
#include "pipeline.hpp"
#include "projection.hpp"
#include "report_io.hpp"
#include "text.hpp"

#endif // ONTOCLUST_ONTOCLUST_HPP
