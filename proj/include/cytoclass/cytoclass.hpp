#ifndef CYTOCLASS_CYTOCLASS_HPP
#define CYTOCLASS_CYTOCLASS_HPP

#include "cytoclass/bundle.hpp"
#include "cytoclass/cart.hpp"
#include "cytoclass/dataset.hpp"
#include "cytoclass/ensemble.hpp"
#include "cytoclass/evaluation.hpp"
#include "cytoclass/kmeans.hpp"
#include "cytoclass/logistic.hpp"
#include "cytoclass/pipeline.hpp"
#include "cytoclass/scaler.hpp"
#include "cytoclass/stats.hpp"

#endif  // CYTOCLASS_CYTOCLASS_HPP
